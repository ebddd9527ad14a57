//! Newform dataset schema, validation, and canonical ingestion.
//!
//! Datasets are UTF-8 JSON: a manifest recording the source of the
//! eigenvalue data and the prime-norm bound, followed by form groups
//! keyed by (field, level).  Ideals are serialized by their norm and two
//! generators; elements use doubled coordinates (x, y) standing for
//! (x + y sqrt(d)) / 2, so integral half-coordinates survive the trip.
//! Validation is total: a record is either accepted or rejected with a
//! reason, and level keys are normalized to canonical ideal form.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use rqfermat::classgrp::class_group;
use rqfermat::eliminate::{EliminationForm, FormEntry, HeckeRing, SurvivorResolution};
use rqfermat::freylevel::{predict_levels, FreyTriple};
use rqfermat::idealkit::Ideal;
use rqfermat::{make_field, FieldCtx, QElem};

use crate::reconstruct::curve_trace;
use crate::sturm;
use crate::{PipelineError, Result};

/// Smallest admissible prime-norm bound for eigenvalue coverage.
pub const MIN_PRIME_NORM_BOUND: u64 = 60;

/// Provenance and coverage statement for a dataset.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub source: String,
    pub retrieved: String,
    pub prime_norm_bound: u64,
}

/// Serialized ideal: norm plus two generators in doubled coordinates.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealRepr {
    pub norm: u64,
    pub gens: [[i64; 2]; 2],
}

/// One Hecke eigenvalue, as coordinates in the power basis.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenRecord {
    pub prime: IdealRepr,
    pub a: Vec<i64>,
}

/// Fallback argument bundled with a form.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionRecord {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_disc_vals: Option<[u32; 2]>,
}

/// One newform record.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormRecord {
    pub label: String,
    pub hecke_poly: Vec<i64>,
    pub eigenvalues: Vec<EigenRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<[[i64; 2]; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<ResolutionRecord>,
}

/// All newforms at one (field, level) pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupRecord {
    pub d: u64,
    pub level: IdealRepr,
    pub provenance: String,
    pub forms: Vec<FormRecord>,
}

/// On-disk dataset layout.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetFile {
    pub manifest: Manifest,
    pub groups: Vec<GroupRecord>,
}

/// A validated group with core-ready form entries.
#[derive(Debug, Clone)]
pub struct ValidatedGroup {
    pub d: u64,
    pub level: Ideal,
    pub provenance: String,
    pub entries: Vec<FormEntry>,
}

/// A fully validated dataset keyed by canonical (field, level).
#[derive(Debug, Clone)]
pub struct Dataset {
    pub manifest: Manifest,
    pub groups: BTreeMap<(u64, Ideal), ValidatedGroup>,
    pub warnings: Vec<String>,
}

/// Serializes an element into doubled coordinates.
pub fn elem_repr(e: &QElem) -> Result<[i64; 2]> {
    let (x, y) = e.coords();
    let xi = x.to_i64();
    let yi = y.to_i64();
    match (xi, yi) {
        (Some(a), Some(b)) => Ok([a, b]),
        _ => Err(PipelineError::Schema(
            "element coordinates exceed the serialization range".into(),
        )),
    }
}

/// Reconstructs an element from doubled coordinates.
pub fn elem_from_repr(fld: &FieldCtx, repr: &[i64; 2]) -> Result<QElem> {
    QElem::new(fld.d(), BigInt::from(repr[0]), BigInt::from(repr[1]))
        .map_err(PipelineError::from)
}

/// Serializes an ideal by norm and canonical generators.
pub fn ideal_repr(ideal: &Ideal) -> Result<IdealRepr> {
    let norm = ideal
        .norm()
        .to_u64()
        .ok_or_else(|| PipelineError::Schema("ideal norm exceeds the serialization range".into()))?;
    let (g1, g2) = ideal.gens();
    Ok(IdealRepr {
        norm,
        gens: [elem_repr(&g1)?, elem_repr(&g2)?],
    })
}

/// Reconstructs and canonicalizes an ideal, checking the declared norm.
pub fn ideal_from_repr(fld: &FieldCtx, repr: &IdealRepr) -> Result<Ideal> {
    let g1 = elem_from_repr(fld, &repr.gens[0])?;
    let g2 = elem_from_repr(fld, &repr.gens[1])?;
    let ideal = Ideal::from_elems(&[g1, g2])?;
    if ideal.norm() != BigInt::from(repr.norm) {
        return Err(PipelineError::Schema(format!(
            "ideal declares norm {} but its generators span norm {}",
            repr.norm,
            ideal.norm()
        )));
    }
    Ok(ideal)
}

/// The distinct level ideals predicted for a field, in canonical order.
pub fn predicted_level_ideals(fld: &FieldCtx) -> Result<Vec<Ideal>> {
    let cls = class_group(fld)?;
    let pred = predict_levels(fld, &cls)?;
    let mut out: Vec<Ideal> = Vec::new();
    for row in &pred.rows {
        if !out.contains(&row.level) {
            out.push(row.level.clone());
        }
    }
    out.sort();
    Ok(out)
}

fn check_irreducible(poly: &[BigInt], ring: &HeckeRing) -> Result<()> {
    let n = poly.len() - 1;
    if n == 1 {
        return Ok(());
    }
    if ring.disc_abs().is_zero() {
        return Err(PipelineError::Schema(
            "hecke polynomial is not squarefree".into(),
        ));
    }
    let has_rational_root = {
        let c0 = &poly[0];
        if c0.is_zero() {
            true
        } else {
            let cauchy = BigInt::one()
                + poly[..poly.len() - 1]
                    .iter()
                    .map(|c| c.abs())
                    .max()
                    .unwrap_or_else(BigInt::zero);
            let bound = c0.abs().min(cauchy);
            if bound > BigInt::from(1_000_000u64) {
                return Err(PipelineError::Schema(
                    "hecke polynomial coefficients too large for the root search".into(),
                ));
            }
            let mut hit = false;
            let mut r = BigInt::one();
            while r <= bound {
                if (c0 % &r).is_zero() {
                    for cand in [r.clone(), -r.clone()] {
                        let mut acc = BigInt::zero();
                        for c in poly.iter().rev() {
                            acc = acc * &cand + c;
                        }
                        if acc.is_zero() {
                            hit = true;
                        }
                    }
                }
                r += 1;
            }
            hit
        }
    };
    match n {
        2 | 3 => {
            if has_rational_root {
                Err(PipelineError::Schema(
                    "hecke polynomial has a rational root".into(),
                ))
            } else {
                Ok(())
            }
        }
        _ => Err(PipelineError::Schema(format!(
            "irreducibility checks support degree <= 3, got {}",
            n
        ))),
    }
}

fn validate_form(
    fld: &FieldCtx,
    level: &Ideal,
    record: &FormRecord,
    bound: u64,
) -> Result<FormEntry> {
    if record.label.is_empty() {
        return Err(PipelineError::Schema("form label is empty".into()));
    }
    let poly: Vec<BigInt> = record.hecke_poly.iter().map(|&c| BigInt::from(c)).collect();
    let ring = HeckeRing::new(poly.clone())?;
    check_irreducible(&poly, &ring)?;
    if !sturm::all_roots_real(&poly) {
        return Err(PipelineError::Schema(format!(
            "form {}: hecke field is not totally real",
            record.label
        )));
    }
    let mut eigenvalues = BTreeMap::new();
    for eig in &record.eigenvalues {
        let prime = ideal_from_repr(fld, &eig.prime)?;
        let factors = prime.factor()?;
        if factors.len() != 1 || factors[0].1 != 1 {
            return Err(PipelineError::Schema(format!(
                "form {}: eigenvalue ideal of norm {} is not prime",
                record.label, eig.prime.norm
            )));
        }
        if !level.is_coprime(&prime)? {
            return Err(PipelineError::Schema(format!(
                "form {}: eigenvalue prime of norm {} divides the level",
                record.label, eig.prime.norm
            )));
        }
        if eig.prime.norm >= bound {
            return Err(PipelineError::Schema(format!(
                "form {}: eigenvalue prime of norm {} exceeds the manifest bound {}",
                record.label, eig.prime.norm, bound
            )));
        }
        let a: Vec<BigInt> = eig.a.iter().map(|&c| BigInt::from(c)).collect();
        ring.check_elem(&a)?;
        let cp = ring.char_poly(&a)?;
        if !sturm::real_roots_within_two_sqrt(&cp, &BigInt::from(eig.prime.norm)) {
            return Err(PipelineError::HeckeBound(format!(
                "form {}: eigenvalue at a prime of norm {} has an embedding beyond 2*sqrt(norm)",
                record.label, eig.prime.norm
            )));
        }
        if eigenvalues.insert(prime, a).is_some() {
            return Err(PipelineError::Schema(format!(
                "form {}: duplicate eigenvalue prime of norm {}",
                record.label, eig.prime.norm
            )));
        }
    }
    if let Some(curve) = &record.curve {
        let u = elem_from_repr(fld, &curve[0])?;
        let v = elem_from_repr(fld, &curve[1])?;
        let triple = FreyTriple::new(u, v)?;
        for (prime_ideal, a) in &eigenvalues {
            let factors = prime_ideal.factor()?;
            let trace = curve_trace(&triple, &factors[0].0)?;
            if a.len() != 1 || a[0] != trace {
                return Err(PipelineError::Schema(format!(
                    "form {}: eigenvalue at a prime of norm {} disagrees with the attached curve",
                    record.label,
                    prime_ideal.norm()
                )));
            }
        }
    }
    let resolution = match &record.resolution {
        None => SurvivorResolution::None,
        Some(r) => match r.kind.as_str() {
            "inertia_potentially_good" => SurvivorResolution::InertiaPotentiallyGood,
            "halberstadt_kraus" => {
                let vals = r.w_disc_vals.ok_or_else(|| {
                    PipelineError::Schema(format!(
                        "form {}: halberstadt_kraus resolution requires w_disc_vals",
                        record.label
                    ))
                })?;
                SurvivorResolution::HalberstadtKraus {
                    w_disc_vals: (vals[0], vals[1]),
                }
            }
            other => {
                return Err(PipelineError::Schema(format!(
                    "form {}: unknown resolution kind {}",
                    record.label, other
                )))
            }
        },
    };
    Ok(FormEntry {
        form: EliminationForm {
            label: record.label.clone(),
            ring,
            eigenvalues,
        },
        resolution,
    })
}

/// Validates a parsed dataset file.
pub fn validate(file: &DatasetFile) -> Result<Dataset> {
    if file.manifest.prime_norm_bound < MIN_PRIME_NORM_BOUND {
        return Err(PipelineError::Schema(format!(
            "manifest prime-norm bound {} is below the minimum {}",
            file.manifest.prime_norm_bound, MIN_PRIME_NORM_BOUND
        )));
    }
    let mut groups = BTreeMap::new();
    let mut warnings = Vec::new();
    let mut predicted: BTreeMap<u64, Vec<Ideal>> = BTreeMap::new();
    for group in &file.groups {
        let fld = make_field(group.d)?;
        let level = ideal_from_repr(&fld, &group.level)?;
        let known = match predicted.get(&group.d) {
            Some(v) => v.clone(),
            None => {
                let v = predicted_level_ideals(&fld)?;
                predicted.insert(group.d, v.clone());
                v
            }
        };
        if !known.contains(&level) {
            warnings.push(format!(
                "d={}: level of norm {} is not among the predicted levels; group retained",
                group.d, group.level.norm
            ));
        }
        let mut entries = Vec::new();
        for form in &group.forms {
            entries.push(validate_form(&fld, &level, form, file.manifest.prime_norm_bound)?);
        }
        let key = (group.d, level.clone());
        if groups
            .insert(
                key,
                ValidatedGroup {
                    d: group.d,
                    level,
                    provenance: group.provenance.clone(),
                    entries,
                },
            )
            .is_some()
        {
            return Err(PipelineError::Schema(format!(
                "duplicate group for d={} at level of norm {}",
                group.d, group.level.norm
            )));
        }
    }
    Ok(Dataset {
        manifest: file.manifest.clone(),
        groups,
        warnings,
    })
}

/// Parses and validates a dataset from a JSON string.
pub fn load_dataset_str(text: &str) -> Result<Dataset> {
    let file: DatasetFile = serde_json::from_str(text)?;
    validate(&file)
}

/// Parses and validates a dataset file.
pub fn load_dataset(path: &Path) -> Result<Dataset> {
    let text = std::fs::read_to_string(path)?;
    load_dataset_str(&text)
}

/// Writes a dataset file atomically: a sibling temporary file is renamed
/// over the target only after a full successful write.
pub fn write_dataset(path: &Path, file: &DatasetFile) -> Result<()> {
    let text = serde_json::to_string_pretty(file)?;
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        path.file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "dataset".into()),
        std::process::id()
    ));
    std::fs::write(&tmp, format!("{}\n", text))?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
