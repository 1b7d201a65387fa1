//! Named verification checks, looked up at runtime by the `verify` command.

use std::thread;

use crate::arith::Prime;
use crate::secondary::{self, Report, Status};

/// A verification that can be run for one index `s` at one prime.
pub trait Check: Send + Sync {
    fn name(&self) -> &'static str;

    fn run(&self, p: Prime, s: u32) -> Report;
}

pub struct AdemIdentity;

impl Check for AdemIdentity {
    fn name(&self) -> &'static str {
        "adem-identity"
    }

    fn run(&self, p: Prime, s: u32) -> Report {
        secondary::verify_adem_identity(s, p).to_report()
    }
}

pub struct ThetaThom;

impl Check for ThetaThom {
    fn name(&self) -> &'static str {
        "theta-thom"
    }

    fn run(&self, p: Prime, s: u32) -> Report {
        secondary::verify_theta_thom(s, p).to_report()
    }
}

pub struct Vanishing;

impl Check for Vanishing {
    fn name(&self) -> &'static str {
        "vanishing"
    }

    fn run(&self, p: Prime, s: u32) -> Report {
        secondary::vanishing_check(s, p).to_report()
    }
}

#[derive(Default)]
pub struct CheckRegistry {
    checks: Vec<Box<dyn Check>>,
}

impl CheckRegistry {
    pub fn new() -> Self {
        CheckRegistry::default()
    }

    /// The three built-in checks.
    pub fn builtin() -> Self {
        let mut r = CheckRegistry::new();
        r.register(Box::new(AdemIdentity));
        r.register(Box::new(ThetaThom));
        r.register(Box::new(Vanishing));
        r
    }

    /// Adds a check, replacing any existing one with the same name.
    pub fn register(&mut self, check: Box<dyn Check>) {
        self.checks.retain(|c| c.name() != check.name());
        self.checks.push(check);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Check> {
        self.checks.iter().find(|c| c.name() == name).map(|c| c.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.checks.iter().map(|c| c.name()).collect()
    }
}

/// Runs `check` for `s = 1..=s_max`, one thread per index; results are
/// returned in index order.
pub fn sweep(check: &dyn Check, p: Prime, s_max: u32) -> Vec<Report> {
    thread::scope(|scope| {
        let handles: Vec<_> = (1..=s_max).map(|s| scope.spawn(move || check.run(p, s))).collect();
        handles.into_iter().map(|h| h.join().expect("check panicked")).collect()
    })
}

/// Exit status for a batch of reports: 1 if anything failed, else 0.
/// Conjectural rows never fail.
pub fn exit_status(reports: &[Report]) -> i32 {
    if reports.iter().any(|r| r.status == Status::Fail) {
        1
    } else {
        0
    }
}
