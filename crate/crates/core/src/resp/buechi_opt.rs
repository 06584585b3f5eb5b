//! Polynomial positivity check for optimistic Büchi instances.
//!
//! Works on run positions: prefix positions first, then loop positions, so
//! "lowest" means smallest position.

use super::{PayoffGame, PlayerSet, RespError};
use crate::game::{Mode, Setting};
use crate::graph::reachable;
use crate::model::{ObjectiveKind, RunIndex, StateId, StateSet, TransitionSystem};

/// Which graph defines reachability between run states.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PreorderReading {
    /// The system with the whole run engraved: order along the run, loop
    /// states mutually reachable.
    #[default]
    Engraved,
    /// The unmodified system.
    Literal,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuechiOptions {
    pub preorder: PreorderReading,
    /// Filter the candidate loop of the bottom-state check on the checked
    /// state instead of the loop variable.
    pub filter_on_checked_state: bool,
    /// Also try tops that win on their own in the bottom-state check.
    pub allow_winning_top: bool,
}

/// Reachability preorder over run positions plus the per-state "lowest
/// reachable" positions.
#[derive(Clone, Debug)]
pub struct RhoOrder {
    len: usize,
    /// `reach[i]` holds every position reachable from position `i`.
    reach: Vec<StateSet>,
    down: Vec<usize>,
    down_f: Vec<Option<usize>>,
}

impl RhoOrder {
    pub fn new(setting: &Setting<'_>, run: &RunIndex, reading: PreorderReading) -> Self {
        let ts = setting.ts;
        let len = run.len();
        let positions = |set: &StateSet| -> StateSet {
            let mut out = StateSet::with_capacity(len);
            for s in set.ones() {
                if let Some(p) = run.position(StateId::from(s)) {
                    out.insert(p);
                }
            }
            out
        };
        let reach = match reading {
            PreorderReading::Engraved => (0..len)
                .map(|i| {
                    let mut r = StateSet::with_capacity(len);
                    let from = if run.is_loop_position(i) {
                        run.prefix_len()
                    } else {
                        i
                    };
                    r.insert_range(from..len);
                    r
                })
                .collect(),
            PreorderReading::Literal => (0..len)
                .map(|i| positions(&reachable(ts, [run.at(i)], None)))
                .collect(),
        };
        let target = setting
            .objective
            .target()
            .cloned()
            .unwrap_or_else(|| ts.empty_set());
        let mut down = Vec::with_capacity(len);
        let mut down_f = Vec::with_capacity(len);
        for i in 0..len {
            let s = run.at(i);
            let arena = setting.arena(&ts.set_of([s]));
            let from_s = reachable(&arena, [s], None);
            down.push(positions(&from_s).ones().next().unwrap_or(i));
            let mut via = target.clone();
            via.grow(ts.num_states());
            via.intersect_with(&from_s);
            let after = reachable(&arena, via.ones().map(StateId::from), None);
            down_f.push(positions(&after).ones().next());
        }
        RhoOrder {
            len,
            reach,
            down,
            down_f,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Position `j` is reachable from position `i`.
    pub fn preceq(&self, i: usize, j: usize) -> bool {
        self.reach[i].contains(j)
    }

    pub fn prec(&self, i: usize, j: usize) -> bool {
        self.preceq(i, j) && !self.preceq(j, i)
    }

    /// Lowest run position reachable from position `i` when only its state
    /// is controlled.
    pub fn down(&self, i: usize) -> usize {
        self.down[i]
    }

    /// As [`RhoOrder::down`], but the path must visit the target first.
    pub fn down_f(&self, i: usize) -> Option<usize> {
        self.down_f[i]
    }

    fn preceq_opt(&self, i: Option<usize>, j: usize) -> bool {
        i.is_some_and(|i| self.preceq(i, j))
    }
}

/// Positivity checker for one optimistic Büchi instance.
#[derive(Debug)]
pub struct BuechiPositivity<'a> {
    pg: PayoffGame<'a>,
    run: &'a RunIndex,
    order: RhoOrder,
    opts: BuechiOptions,
    alone: Vec<bool>,
}

impl<'a> BuechiPositivity<'a> {
    pub fn new(setting: Setting<'a>, opts: BuechiOptions) -> Result<Self, RespError> {
        let found = setting.objective.kind();
        if found != ObjectiveKind::Buechi {
            return Err(RespError::WrongObjective {
                expected: ObjectiveKind::Buechi,
                found,
            });
        }
        if setting.mode != Mode::Optimistic {
            return Err(RespError::WrongMode);
        }
        let run = setting.run.ok_or(RespError::WrongMode)?;
        let order = RhoOrder::new(&setting, run, opts.preorder);
        let pg = PayoffGame::new(setting, PlayerSet::all_states(setting.ts));
        let alone = (0..run.len())
            .map(|i| pg.gamma_states(&setting.ts.set_of([run.at(i)])))
            .collect();
        Ok(BuechiPositivity {
            pg,
            run,
            order,
            opts,
            alone,
        })
    }

    pub fn order(&self) -> &RhoOrder {
        &self.order
    }

    pub fn payoff(&self) -> &PayoffGame<'a> {
        &self.pg
    }

    fn ts(&self) -> &TransitionSystem {
        self.pg.setting().ts
    }

    fn winning(&self, positions: &[usize]) -> bool {
        let set = self.ts().set_of(positions.iter().map(|&p| self.run.at(p)));
        self.pg.gamma_states(&set)
    }

    pub fn is_responsible(&self, s: StateId) -> bool {
        let Some(i) = self.run.position(s) else {
            return false;
        };
        if self.alone[i] {
            return true;
        }
        let o = &self.order;
        let n = o.len();
        if let Some(df) = o.down_f(i) {
            for top in (0..n).filter(|&t| o.preceq(df, t)) {
                if self.alone[top] && !self.opts.allow_winning_top {
                    continue;
                }
                if self.is_bottom(i, top) {
                    return true;
                }
            }
        }
        for bottom in (0..n).filter(|&b| o.prec(b, i) && !self.alone[b]) {
            let Some(dfb) = o.down_f(bottom) else {
                continue;
            };
            for top in (0..n).filter(|&t| o.preceq(i, t) && o.preceq(dfb, t)) {
                for skip in (0..n).filter(|&k| {
                    o.prec(o.down(i), k) && o.preceq(k, i) && o.prec(bottom, k) && o.preceq(k, dfb)
                }) {
                    if self.is_inner(i, bottom, top, skip) {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn is_bottom(&self, i: usize, top: usize) -> bool {
        let o = &self.order;
        let mut c = vec![i, top];
        for j in 0..o.len() {
            let filtered = if self.opts.filter_on_checked_state {
                self.alone[i]
            } else {
                self.alone[j]
            };
            if o.prec(i, j) && o.preceq(j, top) && !filtered && !o.preceq_opt(o.down_f(j), top) {
                c.push(j);
            }
        }
        self.winning(&c)
    }

    fn is_inner(&self, i: usize, bottom: usize, top: usize, skip: usize) -> bool {
        let o = &self.order;
        let mut c = vec![i, bottom];
        for j in 0..o.len() {
            if o.prec(bottom, j)
                && o.preceq(j, top)
                && !self.alone[j]
                && !o.preceq_opt(o.down_f(j), top)
                && !(o.prec(o.down(j), skip) && o.preceq(skip, j))
            {
                c.push(j);
            }
        }
        self.winning(&c)
    }

    /// Responsible states in ascending id order.
    pub fn responsible(&self) -> StateSet {
        let ts = self.ts();
        ts.set_of(ts.states().filter(|&s| self.is_responsible(s)))
    }
}

pub fn positivity_buechi_opt(
    setting: &Setting<'_>,
    s: StateId,
    opts: BuechiOptions,
) -> Result<bool, RespError> {
    Ok(BuechiPositivity::new(*setting, opts)?.is_responsible(s))
}

pub fn positivity_set_buechi_opt(
    setting: &Setting<'_>,
    opts: BuechiOptions,
) -> Result<StateSet, RespError> {
    Ok(BuechiPositivity::new(*setting, opts)?.responsible())
}
