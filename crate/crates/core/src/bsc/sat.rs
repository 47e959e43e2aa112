//! Conflict-driven clause learning SAT solver.
//!
//! Two watched literals, first-UIP learning with clause minimization, VSIDS
//! branching with phase saving, Luby restarts and LBD-based deletion of
//! learnt clauses. Runs are deterministic for a given seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A literal: variable index shifted left by one, low bit set when negated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: u32, negated: bool) -> Lit {
        Lit(var << 1 | negated as u32)
    }

    /// From a nonzero DIMACS literal (variables counted from 1).
    pub fn from_dimacs(x: i32) -> Lit {
        debug_assert!(x != 0);
        Lit::new(x.unsigned_abs() - 1, x < 0)
    }

    pub fn to_dimacs(self) -> i32 {
        let v = (self.var() + 1) as i32;
        if self.is_negated() {
            -v
        } else {
            v
        }
    }

    pub fn var(self) -> u32 {
        self.0 >> 1
    }

    pub fn is_negated(self) -> bool {
        self.0 & 1 == 1
    }

    fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LBool {
    True,
    False,
    Undef,
}

type ClauseRef = u32;
const NO_REASON: ClauseRef = u32::MAX;

struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    deleted: bool,
    lbd: u32,
    activity: f64,
}

#[derive(Clone, Copy)]
struct Watch {
    cref: ClauseRef,
    blocker: Lit,
}

/// Max-heap of variables ordered by activity.
struct VarHeap {
    heap: Vec<u32>,
    pos: Vec<usize>,
}

const NOT_IN_HEAP: usize = usize::MAX;

impl VarHeap {
    fn new() -> Self {
        VarHeap {
            heap: Vec::new(),
            pos: Vec::new(),
        }
    }

    fn grow(&mut self, n: usize) {
        self.pos.resize(n, NOT_IN_HEAP);
    }

    fn contains(&self, v: u32) -> bool {
        self.pos[v as usize] != NOT_IN_HEAP
    }

    fn insert(&mut self, v: u32, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.pos[v as usize] = self.heap.len();
        self.heap.push(v);
        self.sift_up(self.heap.len() - 1, act);
    }

    fn pop(&mut self, act: &[f64]) -> Option<u32> {
        if self.heap.is_empty() {
            return None;
        }
        let top = self.heap[0];
        let last = self.heap.pop().unwrap();
        self.pos[top as usize] = NOT_IN_HEAP;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = 0;
            self.sift_down(0, act);
        }
        Some(top)
    }

    fn increased(&mut self, v: u32, act: &[f64]) {
        if self.contains(v) {
            self.sift_up(self.pos[v as usize], act);
        }
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            let pv = self.heap[parent];
            if act[pv as usize] >= act[v as usize] {
                break;
            }
            self.heap[i] = pv;
            self.pos[pv as usize] = i;
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i;
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        let n = self.heap.len();
        loop {
            let l = 2 * i + 1;
            if l >= n {
                break;
            }
            let r = l + 1;
            let child = if r < n && act[self.heap[r] as usize] > act[self.heap[l] as usize] {
                r
            } else {
                l
            };
            let cv = self.heap[child];
            if act[cv as usize] <= act[v as usize] {
                break;
            }
            self.heap[i] = cv;
            self.pos[cv as usize] = i;
            i = child;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i;
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub learnt_clauses: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatResult {
    /// A total assignment, indexed by variable.
    Sat(Vec<bool>),
    Unsat,
}

pub struct Solver {
    clauses: Vec<Clause>,
    watches: Vec<Vec<Watch>>,
    assigns: Vec<LBool>,
    level: Vec<u32>,
    reason: Vec<ClauseRef>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    heap: VarHeap,
    phase: Vec<bool>,
    seen: Vec<bool>,
    ok: bool,
    rng: ChaCha8Rng,
    randomize: bool,
    num_learnts: usize,
    max_learnts: f64,
    stats: SolverStats,
}

const VAR_DECAY: f64 = 0.95;
const CLAUSE_DECAY: f64 = 0.999;
const RESTART_UNIT: u64 = 100;

fn luby(mut i: u64) -> u64 {
    // Luby sequence 1 1 2 1 1 2 4 ..., 0-based.
    let (mut size, mut seq) = (1u64, 0u32);
    while size < i + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != i {
        size = (size - 1) >> 1;
        seq -= 1;
        i %= size;
    }
    1 << seq
}

impl Default for Solver {
    fn default() -> Self {
        Self::new(0)
    }
}

impl Solver {
    /// Seed 0 gives the plain heuristics (negative phase, variable order by
    /// index); other seeds perturb initial activities and phases.
    pub fn new(seed: u64) -> Self {
        Solver {
            clauses: Vec::new(),
            watches: Vec::new(),
            assigns: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: Vec::new(),
            var_inc: 1.0,
            cla_inc: 1.0,
            heap: VarHeap::new(),
            phase: Vec::new(),
            seen: Vec::new(),
            ok: true,
            rng: ChaCha8Rng::seed_from_u64(seed),
            randomize: seed != 0,
            num_learnts: 0,
            max_learnts: 0.0,
            stats: SolverStats::default(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.assigns.len()
    }

    pub fn stats(&self) -> SolverStats {
        self.stats
    }

    pub fn new_var(&mut self) -> u32 {
        let v = self.assigns.len() as u32;
        self.assigns.push(LBool::Undef);
        self.level.push(0);
        self.reason.push(NO_REASON);
        let (act, ph) = if self.randomize {
            (self.rng.gen::<f64>() * 1e-5, self.rng.gen::<bool>())
        } else {
            (0.0, false)
        };
        self.activity.push(act);
        self.phase.push(ph);
        self.seen.push(false);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.heap.grow(self.assigns.len());
        self.heap.insert(v, &self.activity);
        v
    }

    pub fn ensure_vars(&mut self, n: usize) {
        while self.num_vars() < n {
            self.new_var();
        }
    }

    fn value(&self, l: Lit) -> LBool {
        match self.assigns[l.var() as usize] {
            LBool::Undef => LBool::Undef,
            LBool::True if l.is_negated() => LBool::False,
            LBool::False if l.is_negated() => LBool::True,
            v => v,
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    /// Adds a clause at decision level 0. Returns false once the clause set
    /// is known to be unsatisfiable.
    pub fn add_clause(&mut self, lits: &[Lit]) -> bool {
        if !self.ok {
            return false;
        }
        debug_assert_eq!(self.decision_level(), 0);
        for l in lits {
            self.ensure_vars(l.var() as usize + 1);
        }
        let mut c: Vec<Lit> = lits.to_vec();
        c.sort();
        c.dedup();
        // Tautologies and satisfied clauses are dropped; false literals removed.
        if c.windows(2).any(|w| w[0] == !w[1]) {
            return true;
        }
        if c.iter().any(|&l| self.value(l) == LBool::True) {
            return true;
        }
        c.retain(|&l| self.value(l) != LBool::False);
        match c.len() {
            0 => {
                self.ok = false;
                false
            }
            1 => {
                self.enqueue(c[0], NO_REASON);
                if self.propagate().is_some() {
                    self.ok = false;
                }
                self.ok
            }
            _ => {
                self.attach(c, false, 0);
                true
            }
        }
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool, lbd: u32) -> ClauseRef {
        let cref = self.clauses.len() as ClauseRef;
        self.watches[(!lits[0]).index()].push(Watch {
            cref,
            blocker: lits[1],
        });
        self.watches[(!lits[1]).index()].push(Watch {
            cref,
            blocker: lits[0],
        });
        self.clauses.push(Clause {
            lits,
            learnt,
            deleted: false,
            lbd,
            activity: 0.0,
        });
        cref
    }

    fn enqueue(&mut self, l: Lit, reason: ClauseRef) {
        let v = l.var() as usize;
        debug_assert_eq!(self.assigns[v], LBool::Undef);
        self.assigns[v] = if l.is_negated() { LBool::False } else { LBool::True };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn propagate(&mut self) -> Option<ClauseRef> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[p.index()]);
            let (mut i, mut j) = (0, 0);
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == LBool::True {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref;
                let lits = &mut self.clauses[cref as usize].lits;
                if lits[0] == false_lit {
                    lits.swap(0, 1);
                }
                let first = lits[0];
                let kept = Watch { cref, blocker: first };
                if first != w.blocker && self.value(first) == LBool::True {
                    ws[j] = kept;
                    j += 1;
                    continue;
                }
                let mut moved = false;
                let len = self.clauses[cref as usize].lits.len();
                for k in 2..len {
                    let lk = self.clauses[cref as usize].lits[k];
                    if self.value(lk) != LBool::False {
                        let lits = &mut self.clauses[cref as usize].lits;
                        lits[1] = lk;
                        lits[k] = false_lit;
                        self.watches[(!lk).index()].push(kept);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = kept;
                j += 1;
                if self.value(first) == LBool::False {
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                    self.qhead = self.trail.len();
                    conflict = Some(cref);
                } else {
                    self.enqueue(first, cref);
                }
            }
            ws.truncate(j);
            self.watches[p.index()] = ws;
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    fn bump_var(&mut self, v: u32) {
        self.activity[v as usize] += self.var_inc;
        if self.activity[v as usize] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.increased(v, &self.activity);
    }

    fn bump_clause(&mut self, cref: ClauseRef) {
        let c = &mut self.clauses[cref as usize];
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for c in self.clauses.iter_mut().filter(|c| c.learnt) {
                c.activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    fn analyze(&mut self, mut confl: ClauseRef) -> (Vec<Lit>, u32, u32) {
        let mut learnt = vec![Lit(0)];
        let mut path = 0usize;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        let current = self.decision_level();
        loop {
            if self.clauses[confl as usize].learnt {
                self.bump_clause(confl);
            }
            let start = usize::from(p.is_some());
            let n = self.clauses[confl as usize].lits.len();
            for k in start..n {
                let q = self.clauses[confl as usize].lits[k];
                let v = q.var() as usize;
                if !self.seen[v] && self.level[v] > 0 {
                    self.bump_var(q.var());
                    self.seen[v] = true;
                    if self.level[v] >= current {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var() as usize] {
                    break;
                }
            }
            let lit = self.trail[index];
            p = Some(lit);
            self.seen[lit.var() as usize] = false;
            path -= 1;
            if path == 0 {
                break;
            }
            confl = self.reason[lit.var() as usize];
        }
        learnt[0] = !p.unwrap();

        // Drop literals implied by the rest of the clause.
        let mut to_clear: Vec<Lit> = learnt.clone();
        let abstract_levels = learnt[1..]
            .iter()
            .fold(0u64, |acc, l| acc | 1u64 << (self.level[l.var() as usize] & 63));
        let mut kept = vec![learnt[0]];
        for &l in &learnt[1..] {
            if self.reason[l.var() as usize] == NO_REASON
                || !self.redundant(l, abstract_levels, &mut to_clear)
            {
                kept.push(l);
            }
        }
        for l in to_clear {
            self.seen[l.var() as usize] = false;
        }
        let mut learnt = kept;

        let bt_level = if learnt.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[learnt[i].var() as usize] > self.level[learnt[max_i].var() as usize] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            self.level[learnt[1].var() as usize]
        };
        let mut levels: Vec<u32> = learnt.iter().map(|l| self.level[l.var() as usize]).collect();
        levels.sort_unstable();
        levels.dedup();
        (learnt, bt_level, levels.len() as u32)
    }

    /// Whether `p` follows from seen literals through reason clauses.
    fn redundant(&mut self, p: Lit, abstract_levels: u64, to_clear: &mut Vec<Lit>) -> bool {
        let mut stack = vec![p];
        let top = to_clear.len();
        while let Some(q) = stack.pop() {
            let r = self.reason[q.var() as usize];
            debug_assert!(r != NO_REASON);
            let n = self.clauses[r as usize].lits.len();
            for k in 1..n {
                let l = self.clauses[r as usize].lits[k];
                let v = l.var() as usize;
                if self.seen[v] || self.level[v] == 0 {
                    continue;
                }
                if self.reason[v] != NO_REASON
                    && (abstract_levels >> (self.level[v] & 63)) & 1 == 1
                {
                    self.seen[v] = true;
                    stack.push(l);
                    to_clear.push(l);
                } else {
                    for l in to_clear.drain(top..) {
                        self.seen[l.var() as usize] = false;
                    }
                    return false;
                }
            }
        }
        true
    }

    fn cancel_until(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level as usize];
        for i in (lim..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var() as usize;
            self.assigns[v] = LBool::Undef;
            self.reason[v] = NO_REASON;
            self.phase[v] = !l.is_negated();
            self.heap.insert(l.var(), &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level as usize);
        self.qhead = lim;
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.assigns[v as usize] == LBool::Undef {
                return Some(Lit::new(v, !self.phase[v as usize]));
            }
        }
        None
    }

    fn locked(&self, cref: ClauseRef) -> bool {
        let c = &self.clauses[cref as usize];
        let v = c.lits[0].var() as usize;
        self.reason[v] == cref && self.value(c.lits[0]) == LBool::True
    }

    fn reduce_db(&mut self) {
        let mut learnts: Vec<ClauseRef> = (0..self.clauses.len() as ClauseRef)
            .filter(|&c| {
                let cl = &self.clauses[c as usize];
                cl.learnt && !cl.deleted
            })
            .collect();
        learnts.sort_by(|&a, &b| {
            let (ca, cb) = (&self.clauses[a as usize], &self.clauses[b as usize]);
            cb.lbd
                .cmp(&ca.lbd)
                .then(ca.activity.partial_cmp(&cb.activity).unwrap())
        });
        let target = learnts.len() / 2;
        let mut removed = 0;
        for &c in &learnts {
            if removed >= target {
                break;
            }
            if self.clauses[c as usize].lbd <= 2 || self.locked(c) {
                continue;
            }
            let cl = &mut self.clauses[c as usize];
            cl.deleted = true;
            cl.lits = Vec::new();
            removed += 1;
        }
        self.num_learnts -= removed;
        for ws in &mut self.watches {
            ws.retain(|w| !self.clauses[w.cref as usize].deleted);
        }
    }

    /// Searches for a satisfying assignment of the clauses added so far.
    pub fn solve(&mut self) -> SatResult {
        if !self.ok {
            return SatResult::Unsat;
        }
        if self.propagate().is_some() {
            self.ok = false;
            return SatResult::Unsat;
        }
        let n_orig = self.clauses.iter().filter(|c| !c.learnt).count();
        self.max_learnts = (n_orig as f64 / 3.0).max(2000.0);
        let mut restart_idx = 0u64;
        loop {
            let budget = luby(restart_idx) * RESTART_UNIT;
            restart_idx += 1;
            match self.search(budget) {
                Some(true) => {
                    let model = self
                        .assigns
                        .iter()
                        .map(|&a| a == LBool::True)
                        .collect();
                    self.cancel_until(0);
                    return SatResult::Sat(model);
                }
                Some(false) => {
                    self.ok = false;
                    return SatResult::Unsat;
                }
                None => {
                    self.stats.restarts += 1;
                    self.cancel_until(0);
                }
            }
        }
    }

    fn search(&mut self, budget: u64) -> Option<bool> {
        let mut conflicts = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts += 1;
                if self.decision_level() == 0 {
                    return Some(false);
                }
                let (learnt, bt, lbd) = self.analyze(confl);
                self.cancel_until(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], NO_REASON);
                } else {
                    let first = learnt[0];
                    let cref = self.attach(learnt, true, lbd);
                    self.bump_clause(cref);
                    self.enqueue(first, cref);
                    self.num_learnts += 1;
                    self.stats.learnt_clauses += 1;
                }
                self.var_inc /= VAR_DECAY;
                self.cla_inc /= CLAUSE_DECAY;
            } else {
                if conflicts >= budget {
                    return None;
                }
                if self.num_learnts as f64 >= self.max_learnts + self.trail.len() as f64 {
                    self.reduce_db();
                    self.max_learnts *= 1.1;
                }
                match self.pick_branch() {
                    None => return Some(true),
                    Some(l) => {
                        self.stats.decisions += 1;
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(l, NO_REASON);
                    }
                }
            }
        }
    }
}

/// Solves a clause list given in DIMACS literal form.
pub fn solve_clauses(num_vars: usize, clauses: &[Vec<i32>], seed: u64) -> SatResult {
    let mut s = Solver::new(seed);
    s.ensure_vars(num_vars);
    for c in clauses {
        let lits: Vec<Lit> = c.iter().map(|&x| Lit::from_dimacs(x)).collect();
        if !s.add_clause(&lits) {
            return SatResult::Unsat;
        }
    }
    s.solve()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn satisfies(model: &[bool], clauses: &[Vec<i32>]) -> bool {
        clauses.iter().all(|c| {
            c.iter()
                .any(|&x| model[(x.unsigned_abs() - 1) as usize] == (x > 0))
        })
    }

    #[test]
    fn luby_prefix() {
        let seq: Vec<u64> = (0..15).map(luby).collect();
        assert_eq!(seq, [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn unit_clause() {
        assert_eq!(solve_clauses(1, &[vec![1]], 0), SatResult::Sat(vec![true]));
    }

    #[test]
    fn contradictory_units() {
        assert_eq!(solve_clauses(1, &[vec![1], vec![-1]], 0), SatResult::Unsat);
        assert_eq!(solve_clauses(1, &[vec![]], 0), SatResult::Unsat);
    }

    #[test]
    fn pigeonhole_four_into_three_is_unsat() {
        // p(i, h): pigeon i in hole h.
        let var = |i: i32, h: i32| i * 3 + h + 1;
        let mut cls = Vec::new();
        for i in 0..4 {
            cls.push((0..3).map(|h| var(i, h)).collect());
        }
        for h in 0..3 {
            for i in 0..4 {
                for j in i + 1..4 {
                    cls.push(vec![-var(i, h), -var(j, h)]);
                }
            }
        }
        assert_eq!(solve_clauses(12, &cls, 0), SatResult::Unsat);
        assert_eq!(solve_clauses(12, &cls, 7), SatResult::Unsat);
    }

    #[test]
    fn models_satisfy_their_clauses() {
        let cls = vec![vec![1, 2, -3], vec![-1, 3], vec![-2, 3], vec![-3, 4], vec![-4, -1]];
        match solve_clauses(4, &cls, 0) {
            SatResult::Sat(m) => assert!(satisfies(&m, &cls)),
            SatResult::Unsat => panic!("satisfiable instance"),
        }
    }
}
