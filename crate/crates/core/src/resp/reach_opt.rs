use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{PayoffGame, PlayerSet, ReportEntry, RespError, ResponsibilityReport};
use crate::game::{Mode, Setting};
use crate::model::{ObjectiveKind, StateSet};

fn check(setting: &Setting<'_>) -> Result<(), RespError> {
    let found = setting.objective.kind();
    if found != ObjectiveKind::Reachability {
        return Err(RespError::WrongObjective {
            expected: ObjectiveKind::Reachability,
            found,
        });
    }
    if setting.mode != Mode::Optimistic {
        return Err(RespError::WrongMode);
    }
    Ok(())
}

fn scan(pg: &PayoffGame<'_>) -> StateSet {
    let setting = pg.setting();
    let ts = setting.ts;
    let mut out = ts.empty_set();
    if pg.gamma_states(&ts.empty_set()) {
        return out;
    }
    let Some(run) = setting.run else {
        return out;
    };
    for &s in run.states() {
        if pg.gamma_states(&ts.set_of([s])) {
            out.insert(s.index());
        }
    }
    out
}

/// Optimistic reachability: a state is responsible iff controlling it alone
/// already wins.
pub fn positivity_reach_opt(setting: &Setting<'_>) -> Result<StateSet, RespError> {
    check(setting)?;
    let pg = PayoffGame::new(*setting, PlayerSet::all_states(setting.ts));
    Ok(scan(&pg))
}

/// Every responsible state gets `1/|R|`, all others 0.
pub fn values_reach_opt(setting: &Setting<'_>) -> Result<ResponsibilityReport, RespError> {
    check(setting)?;
    let players = PlayerSet::all_states(setting.ts);
    let pg = PayoffGame::new(*setting, players.clone());
    let responsible = scan(&pg);
    let count = responsible.count_ones(..);
    let share = if count == 0 {
        BigRational::zero()
    } else {
        BigRational::new(BigInt::from(1), BigInt::from(count))
    };
    let entries = players
        .iter()
        .map(|p| ReportEntry {
            name: p.name.clone(),
            members: p.members.clone(),
            value: if responsible.contains(p.members[0].index()) {
                share.clone()
            } else {
                BigRational::zero()
            },
        })
        .collect();
    Ok(ResponsibilityReport {
        mode: setting.mode,
        kind: players.kind(),
        entries,
        stats: pg.stats(),
    })
}
