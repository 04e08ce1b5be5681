//! Small reference instances used in documentation, tests and the CLI.

use crate::fsa::{Fsa, FsaBuilder, Instance};

fn build(b: FsaBuilder) -> Instance {
    b.build_instance().expect("catalog instance is valid")
}

/// Five states, all events observable; `O1` sees `a, b, c` and `O2` sees `a, b, d`.
pub fn branching() -> Instance {
    build(
        Fsa::builder()
            .states(["x0", "x1", "x2", "x3", "x4"])
            .observable(["a", "b", "c", "d"])
            .initial(["x0"])
            .transition("x0", "a", "x1")
            .transition("x0", "a", "x2")
            .transition("x1", "c", "x3")
            .transition("x1", "c", "x4")
            .transition("x1", "b", "x1")
            .transition("x2", "b", "x2")
            .transition("x3", "d", "x3")
            .transition("x4", "d", "x4")
            .observer("O1", ["a", "b", "c"])
            .observer("O2", ["a", "b", "d"]),
    )
}

/// Fault `f` after `a b` on one branch; `O1` sees `a`, `O2` sees `b`.
pub fn late_fault() -> Instance {
    build(
        Fsa::builder()
            .states(["x0", "x1", "x2", "x3", "x4", "x5"])
            .observable(["a", "b"])
            .unobservable(["f", "u"])
            .faulty(["f"])
            .initial(["x0"])
            .transition("x0", "a", "x1")
            .transition("x0", "a", "x2")
            .transition("x1", "b", "x3")
            .transition("x2", "b", "x4")
            .transition("x3", "f", "x5")
            .transition("x5", "u", "x5")
            .transition("x4", "u", "x4")
            .observer("O1", ["a"])
            .observer("O2", ["b"]),
    )
}

/// Two initial states joined at deadlock `x2` by `f` and `u`; optionally a `u` loop on `x2`.
pub fn joined_deadlock(loop_on_x2: bool) -> Instance {
    let mut b = Fsa::builder()
        .states(["x0", "x1", "x2"])
        .unobservable(["f", "u"])
        .faulty(["f"])
        .initial(["x0", "x1"])
        .transition("x0", "f", "x2")
        .transition("x1", "u", "x2");
    if loop_on_x2 {
        b = b.transition("x2", "u", "x2");
    }
    build(b)
}

/// `x0 -f-> x1`, `x0 -u-> x2` with a `u` loop on `x2`; optionally an `f` loop on `x1`.
pub fn fault_or_silent_loop(fault_loop_on_x1: bool) -> Instance {
    let mut b = Fsa::builder()
        .states(["x0", "x1", "x2"])
        .unobservable(["f", "u"])
        .faulty(["f"])
        .initial(["x0"])
        .transition("x0", "f", "x1")
        .transition("x0", "u", "x2")
        .transition("x2", "u", "x2");
    if fault_loop_on_x1 {
        b = b.transition("x1", "f", "x1");
    }
    build(b)
}

/// `x0 -f-> x1`, `x0 -u-> x2`; optionally `u` loops on both leaves.
pub fn fault_or_silent(u_loops: bool) -> Instance {
    let mut b = Fsa::builder()
        .states(["x0", "x1", "x2"])
        .unobservable(["f", "u"])
        .faulty(["f"])
        .initial(["x0"])
        .transition("x0", "f", "x1")
        .transition("x0", "u", "x2");
    if u_loops {
        b = b.transition("x1", "u", "x1").transition("x2", "u", "x2");
    }
    build(b)
}

/// Fault-free `x0 -u-> x1`, `x0 -u-> x2` with a `u` loop on `x2`; optionally a faulty `f` loop on `x1`.
pub fn silent_fork(fault_loop_on_x1: bool) -> Instance {
    let mut b = Fsa::builder()
        .states(["x0", "x1", "x2"])
        .unobservable(["u"])
        .initial(["x0"])
        .transition("x0", "u", "x1")
        .transition("x0", "u", "x2")
        .transition("x2", "u", "x2");
    if fault_loop_on_x1 {
        b = b.unobservable(["f"]).faulty(["f"]).transition("x1", "f", "x1");
    }
    build(b)
}

/// Names accepted by [`by_name`].
pub const NAMES: &[&str] = &[
    "branching",
    "late-fault",
    "joined-deadlock",
    "joined-deadlock-loop",
    "fault-or-loop",
    "fault-or-loop-faulty",
    "fault-or-silent",
    "fault-or-silent-loops",
    "silent-fork",
    "silent-fork-faulty",
];

pub fn by_name(name: &str) -> Option<Instance> {
    Some(match name {
        "branching" => branching(),
        "late-fault" => late_fault(),
        "joined-deadlock" => joined_deadlock(false),
        "joined-deadlock-loop" => joined_deadlock(true),
        "fault-or-loop" => fault_or_silent_loop(false),
        "fault-or-loop-faulty" => fault_or_silent_loop(true),
        "fault-or-silent" => fault_or_silent(false),
        "fault-or-silent-loops" => fault_or_silent(true),
        "silent-fork" => silent_fork(false),
        "silent-fork-faulty" => silent_fork(true),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    #[test]
    fn every_name_resolves() {
        for n in super::NAMES {
            assert!(super::by_name(n).is_some(), "{n}");
        }
        assert!(super::by_name("nope").is_none());
    }
}
