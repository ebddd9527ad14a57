//! Report assembly and rendering.
//!
//! A report captures one field end to end: invariants, predicted levels,
//! odd representatives, irreducibility evidence, the elimination table,
//! and the verdict.  The JSON rendering is the machine-readable artifact;
//! the text rendering is a stable line-oriented summary.  Both are
//! byte-identical across runs on identical inputs.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use rqfermat::classgrp::{class_group, h_set, narrow_class_group, ClassGroupData};
use rqfermat::eliminate::{
    eliminate_field, EliminationReport, LevelData, ResolutionOutcome, Verdict,
};
use rqfermat::freylevel::{predict_levels, PredictedLevels};
use rqfermat::idealkit::Ideal;
use rqfermat::irred::{irreducibility_report, IrreducibilityReport};
use rqfermat::{make_field, FieldCtx, QElem, TwoSplitting};

use crate::dataset::Dataset;
use crate::Result;

/// One predicted-level table row.
#[derive(Debug, Clone, Serialize)]
pub struct LevelLine {
    pub case: String,
    pub exponents: Vec<u32>,
    pub even_part: String,
    pub even_part_norm: String,
    pub odd_part: String,
    pub level: String,
    pub level_norm: String,
}

/// One ray-class-group check row.
#[derive(Debug, Clone, Serialize)]
pub struct RayLine {
    pub modulus: String,
    pub invariants: Vec<String>,
    pub exponent: String,
    pub exponent_divides_four: bool,
}

/// Summary of the ramified supersingular exclusion.
#[derive(Debug, Clone, Serialize)]
pub struct SupersingularLine {
    pub p: u64,
    pub q0_norm: String,
    pub all_exclude: bool,
}

/// Summary of the unit-norm factorization check.
#[derive(Debug, Clone, Serialize)]
pub struct UnitNormLine {
    pub n: u32,
    pub norm_abs: String,
    pub factors: BTreeMap<u64, u32>,
    pub residual_primes: Vec<u64>,
}

/// Irreducibility evidence for one field.
#[derive(Debug, Clone, Serialize)]
pub struct IrredSection {
    pub ray_checks: Vec<RayLine>,
    pub case_i_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub supersingular: Option<SupersingularLine>,
    pub unit_norm_check: UnitNormLine,
    pub facts_used: Vec<String>,
    pub obstructions: Vec<String>,
    pub certified: bool,
}

/// One surviving prime with its refinement flags.
#[derive(Debug, Clone, Serialize)]
pub struct SurvivorLine {
    pub p: u64,
    pub confirmed: bool,
    pub flagged_index: bool,
}

/// One elimination-table row; rows without a form describe the level.
#[derive(Debug, Clone, Serialize)]
pub struct ElimLine {
    pub level: String,
    pub level_norm: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub form: Option<String>,
    pub status: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub surviving: Vec<SurvivorLine>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<String>,
}

/// The theorem-level outcome for one field.
#[derive(Debug, Clone, Serialize)]
pub struct VerdictSection {
    pub code: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classes_mod_8: Option<Vec<u64>>,
    pub detail: String,
}

/// A full field report; optional sections reflect how much was run.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub d: u64,
    pub discriminant: String,
    pub class_number: String,
    pub narrow_class_number: String,
    pub fundamental_unit: String,
    pub fundamental_unit_norm: i8,
    pub two_splitting: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub odd_reps: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<LevelLine>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub irreducibility: Option<IrredSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elimination: Option<Vec<ElimLine>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warnings: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictSection>,
}

fn fmt_int_pair(a: &BigInt, b: &BigInt, d: u64) -> String {
    if b.is_zero() {
        return a.to_string();
    }
    let root = format!("sqrt({})", d);
    let bterm = if b.is_one() {
        root
    } else if *b == BigInt::from(-1) {
        format!("-{}", root)
    } else {
        format!("{}*{}", b, root)
    };
    if a.is_zero() {
        bterm
    } else if b.is_negative() {
        format!("{}{}", a, bterm)
    } else {
        format!("{}+{}", a, bterm)
    }
}

/// Renders an element as `a+b*sqrt(d)`, halved when the coordinates demand it.
pub fn fmt_elem(e: &QElem) -> String {
    let (x, y) = e.coords();
    if !x.bit(0) && !y.bit(0) {
        fmt_int_pair(&(x / 2), &(y / 2), e.d())
    } else {
        format!("({})/2", fmt_int_pair(x, y, e.d()))
    }
}

/// Renders an ideal by a single generator when one of its basis elements
/// generates it, otherwise by the basis pair.
pub fn fmt_ideal(ideal: &Ideal) -> String {
    if ideal.is_one() {
        return "(1)".into();
    }
    let (g1, g2) = ideal.gens();
    for g in [&g1, &g2] {
        if !g.is_zero() {
            if let Ok(pr) = Ideal::principal(g) {
                if &pr == ideal {
                    return format!("({})", fmt_elem(g));
                }
            }
        }
    }
    format!("({}, {})", fmt_elem(&g1), fmt_elem(&g2))
}

fn splitting_name(s: TwoSplitting) -> &'static str {
    match s {
        TwoSplitting::Split => "split",
        TwoSplitting::Inert => "inert",
        TwoSplitting::Ramified => "ramified",
    }
}

/// The distinct predicted level ideals, sorted.
pub fn distinct_levels(pred: &PredictedLevels) -> Vec<Ideal> {
    let mut out: Vec<Ideal> = Vec::new();
    for row in &pred.rows {
        if !out.contains(&row.level) {
            out.push(row.level.clone());
        }
    }
    out.sort();
    out
}

fn base_report(fld: &FieldCtx, cls: &ClassGroupData) -> Result<Report> {
    let narrow = narrow_class_group(fld, cls)?;
    Ok(Report {
        d: fld.d(),
        discriminant: fld.disc().to_string(),
        class_number: cls.h().to_string(),
        narrow_class_number: narrow.group.order().to_string(),
        fundamental_unit: fmt_elem(fld.fundamental_unit()),
        fundamental_unit_norm: fld.fundamental_unit_norm(),
        two_splitting: splitting_name(fld.two_splitting()).into(),
        odd_reps: None,
        levels: None,
        irreducibility: None,
        elimination: None,
        warnings: None,
        verdict: None,
    })
}

fn level_lines(pred: &PredictedLevels) -> Vec<LevelLine> {
    let mut out = Vec::new();
    for row in &pred.rows {
        let exponents = pred
            .even_rows
            .iter()
            .find(|er| er.lambda == row.lambda && er.even_part == row.even_part)
            .map(|er| er.exponents.clone())
            .unwrap_or_default();
        let case = match &row.lambda {
            Some(l) => format!("lambda = {}", fmt_elem(l)),
            None => "2 does not divide abc".into(),
        };
        out.push(LevelLine {
            case,
            exponents,
            even_part: fmt_ideal(&row.even_part),
            even_part_norm: row.even_part.norm().to_string(),
            odd_part: fmt_ideal(&row.m),
            level: fmt_ideal(&row.level),
            level_norm: row.level.norm().to_string(),
        });
    }
    out
}

fn irred_section(rep: &IrreducibilityReport) -> IrredSection {
    IrredSection {
        ray_checks: rep
            .ray_checks
            .iter()
            .map(|c| RayLine {
                modulus: fmt_ideal(&c.modulus),
                invariants: c.invariants.iter().map(|i| i.to_string()).collect(),
                exponent: c.exponent.to_string(),
                exponent_divides_four: c.exponent_divides_four,
            })
            .collect(),
        case_i_ok: rep.case_i_ok,
        supersingular: rep.supersingular.as_ref().map(|s| SupersingularLine {
            p: s.p,
            q0_norm: s.q0_norm.to_string(),
            all_exclude: s.all_exclude,
        }),
        unit_norm_check: UnitNormLine {
            n: rep.split_check.n,
            norm_abs: rep.split_check.norm_abs.to_string(),
            factors: rep.split_check.factors.clone(),
            residual_primes: rep.split_check.residual_primes.clone(),
        },
        facts_used: rep.facts_used.iter().map(|s| s.to_string()).collect(),
        obstructions: rep.obstructions.clone(),
        certified: rep.certified,
    }
}

fn resolution_text(r: &ResolutionOutcome) -> Option<String> {
    match r {
        ResolutionOutcome::NotNeeded => None,
        ResolutionOutcome::KilledAll => {
            Some("eliminated by the potential-good-reduction inertia argument".into())
        }
        ResolutionOutcome::KilledClasses(cs) => {
            let cs: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
            Some(format!("eliminated for p = {} mod 8", cs.join(", ")))
        }
        ResolutionOutcome::Unresolved => Some("unresolved".into()),
    }
}

fn elim_lines(elim: &EliminationReport) -> Vec<ElimLine> {
    let mut out = Vec::new();
    for lr in &elim.levels {
        let level = fmt_ideal(&lr.level);
        let level_norm = lr.level.norm().to_string();
        if lr.missing {
            out.push(ElimLine {
                level,
                level_norm,
                form: None,
                status: "missing".into(),
                surviving: vec![],
                resolution: None,
            });
            continue;
        }
        if lr.outcomes.is_empty() {
            out.push(ElimLine {
                level,
                level_norm,
                form: None,
                status: "no newforms".into(),
                surviving: vec![],
                resolution: None,
            });
            continue;
        }
        for oc in &lr.outcomes {
            let status = if oc.elimination.c_f_is_zero {
                "C_f = 0".to_string()
            } else if oc.elimination.surviving.is_empty() {
                "eliminated".to_string()
            } else {
                "survivors remain".to_string()
            };
            out.push(ElimLine {
                level: level.clone(),
                level_norm: level_norm.clone(),
                form: Some(oc.elimination.label.clone()),
                status,
                surviving: oc
                    .elimination
                    .surviving
                    .iter()
                    .map(|s| SurvivorLine {
                        p: s.p,
                        confirmed: s.confirmed,
                        flagged_index: s.flagged_index,
                    })
                    .collect(),
                resolution: resolution_text(&oc.resolution),
            });
        }
    }
    out
}

fn verdict_section(
    elim: &EliminationReport,
    irred: &IrreducibilityReport,
) -> VerdictSection {
    let missing: Vec<String> = elim
        .levels
        .iter()
        .filter(|l| l.missing)
        .map(|l| format!("{} of norm {}", fmt_ideal(&l.level), l.level.norm()))
        .collect();
    if !missing.is_empty() {
        let mut detail = format!("no newform data for level(s) {}", missing.join(", "));
        if !irred.certified {
            detail.push_str("; irreducibility also uncertified");
        }
        return VerdictSection {
            code: "DATA_INCOMPLETE".into(),
            classes_mod_8: None,
            detail,
        };
    }
    if !irred.certified {
        return VerdictSection {
            code: "OBSTRUCTED".into(),
            classes_mod_8: None,
            detail: format!(
                "irreducibility uncertified: {}",
                irred.obstructions.join("; ")
            ),
        };
    }
    match &elim.verdict {
        Verdict::ProvenAll => VerdictSection {
            code: "PROVEN_ALL".into(),
            classes_mod_8: None,
            detail: "every newform at every predicted level is eliminated for all p >= 17".into(),
        },
        Verdict::ProvenCongruenceClasses(cs) => {
            let txt: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
            VerdictSection {
                code: "PROVEN_CONGRUENCE_CLASSES".into(),
                classes_mod_8: Some(cs.clone()),
                detail: format!(
                    "every newform is eliminated when p = {} mod 8",
                    txt.join(", ")
                ),
            }
        }
        Verdict::Obstructed => {
            let unresolved: Vec<String> = elim
                .levels
                .iter()
                .flat_map(|l| l.outcomes.iter())
                .filter(|oc| {
                    oc.resolution == ResolutionOutcome::Unresolved
                        || (!oc.elimination.surviving.is_empty()
                            && oc.resolution == ResolutionOutcome::NotNeeded)
                })
                .map(|oc| oc.elimination.label.clone())
                .collect();
            VerdictSection {
                code: "OBSTRUCTED".into(),
                classes_mod_8: None,
                detail: format!("unresolved form(s): {}", unresolved.join(", ")),
            }
        }
        Verdict::DataIncomplete => VerdictSection {
            code: "DATA_INCOMPLETE".into(),
            classes_mod_8: None,
            detail: "newform data missing".into(),
        },
    }
}

/// Field invariants only.
pub fn field_info(d: u64) -> Result<Report> {
    let fld = make_field(d)?;
    let cls = class_group(&fld)?;
    base_report(&fld, &cls)
}

/// Field invariants plus predicted levels and odd representatives.
pub fn predict_report(d: u64) -> Result<Report> {
    let fld = make_field(d)?;
    let cls = class_group(&fld)?;
    let pred = predict_levels(&fld, &cls)?;
    let mut rep = base_report(&fld, &cls)?;
    rep.odd_reps = Some(h_set(&cls)?.iter().map(fmt_ideal).collect());
    rep.levels = Some(level_lines(&pred));
    Ok(rep)
}

/// Field invariants plus irreducibility evidence.
pub fn irred_report(d: u64) -> Result<Report> {
    let fld = make_field(d)?;
    let cls = class_group(&fld)?;
    let irred = irreducibility_report(&fld, &cls)?;
    let mut rep = base_report(&fld, &cls)?;
    rep.irreducibility = Some(irred_section(&irred));
    Ok(rep)
}

/// Runs the whole chain for one field against a validated dataset.
pub fn run_pipeline(d: u64, dataset: &Dataset) -> Result<Report> {
    let fld = make_field(d)?;
    let cls = class_group(&fld)?;
    let pred = predict_levels(&fld, &cls)?;
    let irred = irreducibility_report(&fld, &cls)?;
    let mut level_data = Vec::new();
    for level in distinct_levels(&pred) {
        let forms = dataset
            .groups
            .get(&(d, level.clone()))
            .map(|g| g.entries.clone());
        level_data.push(LevelData { level, forms });
    }
    let elim = eliminate_field(d, &level_data)?;
    let mut rep = base_report(&fld, &cls)?;
    rep.odd_reps = Some(h_set(&cls)?.iter().map(fmt_ideal).collect());
    rep.levels = Some(level_lines(&pred));
    rep.irreducibility = Some(irred_section(&irred));
    rep.elimination = Some(elim_lines(&elim));
    let prefix = format!("d={}:", d);
    let warnings: Vec<String> = dataset
        .warnings
        .iter()
        .filter(|w| w.starts_with(&prefix))
        .cloned()
        .collect();
    if !warnings.is_empty() {
        rep.warnings = Some(warnings);
    }
    rep.verdict = Some(verdict_section(&elim, &irred));
    Ok(rep)
}

/// JSON rendering, pretty-printed with a trailing newline.
pub fn render_json(rep: &Report) -> Result<String> {
    Ok(format!("{}\n", serde_json::to_string_pretty(rep)?))
}

/// Stable line-oriented text rendering.
pub fn render_text(rep: &Report) -> String {
    let mut s = String::new();
    s.push_str(&format!("field Q(sqrt({}))\n", rep.d));
    s.push_str(&format!("  discriminant: {}\n", rep.discriminant));
    s.push_str(&format!(
        "  class number: {} (narrow {})\n",
        rep.class_number, rep.narrow_class_number
    ));
    s.push_str(&format!(
        "  fundamental unit: {} (norm {})\n",
        rep.fundamental_unit, rep.fundamental_unit_norm
    ));
    s.push_str(&format!("  2 is {}\n", rep.two_splitting));
    if let Some(reps) = &rep.odd_reps {
        s.push_str("odd representatives:\n");
        for r in reps {
            s.push_str(&format!("  {}\n", r));
        }
    }
    if let Some(levels) = &rep.levels {
        s.push_str("predicted levels:\n");
        for l in levels {
            let exps: Vec<String> = l.exponents.iter().map(|e| e.to_string()).collect();
            s.push_str(&format!(
                "  case {}: even exponents [{}], even part {} (norm {}), odd part {}, level {} (norm {})\n",
                l.case,
                exps.join(", "),
                l.even_part,
                l.even_part_norm,
                l.odd_part,
                l.level,
                l.level_norm
            ));
        }
    }
    if let Some(irr) = &rep.irreducibility {
        s.push_str("irreducibility:\n");
        for c in &irr.ray_checks {
            s.push_str(&format!(
                "  ray class group mod {}: invariants [{}], exponent {} (divides 4: {})\n",
                c.modulus,
                c.invariants.join(", "),
                c.exponent,
                if c.exponent_divides_four { "yes" } else { "no" }
            ));
        }
        if let Some(ss) = &irr.supersingular {
            s.push_str(&format!(
                "  supersingular check at p={} with q0 of norm {}: {}\n",
                ss.p,
                ss.q0_norm,
                if ss.all_exclude { "excludes" } else { "fails" }
            ));
        }
        let u = &irr.unit_norm_check;
        let factors: Vec<String> = u
            .factors
            .iter()
            .map(|(p, e)| {
                if *e == 1 {
                    p.to_string()
                } else {
                    format!("{}^{}", p, e)
                }
            })
            .collect();
        s.push_str(&format!(
            "  |norm(u^{} - 1)| = {} = {}\n",
            u.n,
            u.norm_abs,
            factors.join(" * ")
        ));
        if !u.residual_primes.is_empty() {
            let rp: Vec<String> = u.residual_primes.iter().map(|p| p.to_string()).collect();
            s.push_str(&format!("  residual split primes: {}\n", rp.join(", ")));
        }
        for o in &irr.obstructions {
            s.push_str(&format!("  note: {}\n", o));
        }
        s.push_str(&format!(
            "  certified: {}\n",
            if irr.certified { "yes" } else { "no" }
        ));
    }
    if let Some(elim) = &rep.elimination {
        s.push_str("elimination:\n");
        for l in elim {
            let mut line = format!("  level {} (norm {})", l.level, l.level_norm);
            if let Some(f) = &l.form {
                line.push_str(&format!(", form {}", f));
            }
            line.push_str(&format!(": {}", l.status));
            if !l.surviving.is_empty() {
                let ps: Vec<String> = l
                    .surviving
                    .iter()
                    .map(|sp| {
                        let mut t = sp.p.to_string();
                        if !sp.confirmed {
                            t.push_str(" (unconfirmed)");
                        }
                        if sp.flagged_index {
                            t.push_str(" (index flagged)");
                        }
                        t
                    })
                    .collect();
                line.push_str(&format!("; surviving p: {}", ps.join(", ")));
            }
            if let Some(r) = &l.resolution {
                line.push_str(&format!("; {}", r));
            }
            line.push('\n');
            s.push_str(&line);
        }
    }
    if let Some(ws) = &rep.warnings {
        s.push_str("warnings:\n");
        for w in ws {
            s.push_str(&format!("  {}\n", w));
        }
    }
    if let Some(v) = &rep.verdict {
        s.push_str(&format!("verdict: {}  ({})\n", v.code, v.detail));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elem_formatting() {
        let fld = make_field(17).unwrap();
        assert_eq!(fmt_elem(&fld.int(3)), "3");
        assert_eq!(fmt_elem(&fld.elem(0, 1)), "sqrt(17)");
        assert_eq!(fmt_elem(&fld.elem(4, -1)), "4-sqrt(17)");
        assert_eq!(
            fmt_elem(&fld.half(BigInt::from(-13), BigInt::from(5)).unwrap()),
            "(-13+5*sqrt(17))/2"
        );
        let f3 = make_field(3).unwrap();
        assert_eq!(fmt_elem(&f3.elem(8, 4)), "8+4*sqrt(3)");
        assert_eq!(fmt_elem(&f3.elem(0, -1)), "-sqrt(3)");
    }

    #[test]
    fn ideal_formatting_prefers_single_generators() {
        assert_eq!(
            fmt_ideal(&Ideal::rational(17, &BigInt::from(2)).unwrap()),
            "(2)"
        );
        assert_eq!(fmt_ideal(&Ideal::one(17)), "(1)");
        let f3 = make_field(3).unwrap();
        let p = Ideal::principal(&f3.elem(1, 1)).unwrap();
        assert_eq!(fmt_ideal(&p), "(1+sqrt(3))");
    }

    #[test]
    fn field_info_reports_basics() {
        let rep = field_info(5).unwrap();
        assert_eq!(rep.class_number, "1");
        assert_eq!(rep.two_splitting, "inert");
        assert_eq!(rep.fundamental_unit, "(1+sqrt(5))/2");
        assert_eq!(rep.fundamental_unit_norm, -1);
    }

    #[test]
    fn predict_report_is_deterministic() {
        let a = render_text(&predict_report(10).unwrap());
        let b = render_text(&predict_report(10).unwrap());
        assert_eq!(a, b);
        assert!(a.contains("predicted levels:"));
        let ja = render_json(&predict_report(10).unwrap()).unwrap();
        let jb = render_json(&predict_report(10).unwrap()).unwrap();
        assert_eq!(ja, jb);
    }

    #[test]
    fn irred_report_certifies_small_field() {
        let rep = irred_report(2).unwrap();
        let irr = rep.irreducibility.unwrap();
        assert!(irr.certified);
        assert!(!irr.ray_checks.is_empty());
    }
}
