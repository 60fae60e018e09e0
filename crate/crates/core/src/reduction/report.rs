use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{Citation, ReductionTrace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conjecture {
    /// Gorenstein symmetry: `id_A A < ∞ ⇔ id_{A^op} A < ∞`.
    GorensteinSymmetry,
    AuslanderReiten,
    GorensteinProjective,
}

impl Conjecture {
    pub const ALL: [Conjecture; 3] = [
        Conjecture::GorensteinSymmetry,
        Conjecture::AuslanderReiten,
        Conjecture::GorensteinProjective,
    ];

    pub fn short(self) -> &'static str {
        match self {
            Conjecture::GorensteinSymmetry => "GSC",
            Conjecture::AuslanderReiten => "ARC",
            Conjecture::GorensteinProjective => "GPC",
        }
    }

    fn transfer_theorem(self) -> Citation {
        match self {
            Conjecture::GorensteinSymmetry => Citation::SymmetryConjectureTransfer,
            _ => Citation::ConjectureTransfer,
        }
    }
}

/// Classes of cores for which conclusions are drawn without further work.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KnownClass {
    SelfInjective,
    Monomial,
    RadicalSquareZero,
    LocalRadicalCubeZero,
}

impl KnownClass {
    fn name(self) -> &'static str {
        match self {
            KnownClass::SelfInjective => "self-injective",
            KnownClass::Monomial => "monomial",
            KnownClass::RadicalSquareZero => "radical square zero",
            KnownClass::LocalRadicalCubeZero => "local with radical cube zero",
        }
    }

    fn settles(self) -> &'static [Conjecture] {
        match self {
            KnownClass::SelfInjective => &[Conjecture::GorensteinSymmetry],
            KnownClass::Monomial => &Conjecture::ALL,
            KnownClass::RadicalSquareZero | KnownClass::LocalRadicalCubeZero => {
                &[Conjecture::AuslanderReiten, Conjecture::GorensteinProjective]
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transfer {
    pub conjecture: Conjecture,
    pub statement: String,
    pub citations: Vec<Citation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conclusion {
    pub conjecture: Conjecture,
    pub statement: String,
    pub reason: String,
    pub citations: Vec<Citation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub transfers: Vec<Transfer>,
    pub core_classes: Vec<KnownClass>,
    pub conclusions: Vec<Conclusion>,
}

pub fn conjecture_report(trace: &ReductionTrace) -> ConjectureReport {
    let cors = trace.corollaries();
    let reduced = !cors.is_empty();
    let target = if reduced { "the core" } else { "A itself" };
    let transfers = Conjecture::ALL
        .iter()
        .map(|&c| Transfer {
            conjecture: c,
            statement: format!("A satisfies {} iff {target} does", c.short()),
            citations: if reduced {
                cors.iter().copied().chain([c.transfer_theorem()]).collect()
            } else {
                Vec::new()
            },
        })
        .collect();

    let mut reasons: Vec<(Conjecture, String)> = Vec::new();
    for class in &trace.summary.core_classes {
        for &c in class.settles() {
            reasons.push((c, format!("core is {}", class.name())));
        }
    }
    if trace.summary.core_gorenstein.settles_symmetry() {
        reasons.push((
            Conjecture::GorensteinSymmetry,
            "both injective dimensions of the core are certified".into(),
        ));
    }
    let mut conclusions: Vec<Conclusion> = Vec::new();
    for c in Conjecture::ALL {
        if let Some((_, reason)) = reasons.iter().find(|(x, _)| *x == c) {
            conclusions.push(Conclusion {
                conjecture: c,
                statement: format!("A satisfies {}", c.short()),
                reason: reason.clone(),
                citations: if reduced {
                    cors.iter().copied().chain([c.transfer_theorem()]).collect()
                } else {
                    Vec::new()
                },
            });
        }
    }
    ConjectureReport {
        transfers,
        core_classes: trace.summary.core_classes.clone(),
        conclusions,
    }
}

impl ConjectureReport {
    pub fn render(&self) -> String {
        let cite = |cs: &[Citation]| {
            if cs.is_empty() {
                String::new()
            } else {
                let names: Vec<&str> = cs.iter().map(|c| c.anchor()).collect();
                format!(" [{}]", names.join(", "))
            }
        };
        let mut out = String::new();
        for t in &self.transfers {
            let _ = writeln!(out, "{}{}", t.statement, cite(&t.citations));
        }
        if self.conclusions.is_empty() {
            let _ = writeln!(out, "no unconditional conclusion");
        }
        for c in &self.conclusions {
            let _ = writeln!(out, "{} ({}){}", c.statement, c.reason, cite(&c.citations));
        }
        out
    }
}
