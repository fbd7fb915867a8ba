//! Instance file schema (version 1) and compilation into core types.
//!
//! Parsing is two-stage: serde handles shape (unknown fields rejected,
//! first error wins), then semantic validation runs to completion and
//! reports every problem it finds.

use std::collections::BTreeMap;

use serde::Deserialize;

use distchoice::mechanism::{Market, School, StudentPreference};
use distchoice::pref::DistributionalPreference;
use distchoice::preferences::{
    additive_preference, dichotomous_bounds_preference, diversity_preference,
    matroid_rank_preference, pointwise_preference, soft_bounds_preference, Bounds, DiversityIndex,
    TypeAssignment, ValueFunction,
};
use distchoice::set::{GroundSet, PriorityRanking, StudentSet};
use distchoice::{partition_matroid, transversal_matroid, vector_matroid};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub schema_version: u32,
    pub students: Vec<String>,
    #[serde(default)]
    pub types: Option<TypesSpec>,
    #[serde(default)]
    pub schools: Vec<SchoolSpec>,
    #[serde(default)]
    pub student_preferences: Option<BTreeMap<String, Vec<String>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypesSpec {
    pub names: Vec<String>,
    /// Student label to type name.
    pub assignment: BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchoolSpec {
    pub id: String,
    pub capacity: usize,
    /// Highest priority first.
    pub priority: Vec<String>,
    pub preference: PreferenceSpec,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum PreferenceSpec {
    Additive(ValuesParams),
    Pointwise(ValuesParams),
    DichotomousBounds(BoundsParams),
    SoftBounds(SoftBoundsParams),
    PartitionMatroidRank(PartitionParams),
    TransversalMatroidRank(TransversalParams),
    VectorMatroidRank(VectorParams),
    Diversity(DiversityParams),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValuesParams {
    pub values: BTreeMap<String, f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsParams {
    pub floors: BTreeMap<String, usize>,
    pub ceilings: BTreeMap<String, usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SoftBoundsParams {
    pub floors: BTreeMap<String, usize>,
    pub ceilings: BTreeMap<String, usize>,
    #[serde(default)]
    pub floor_penalty: Option<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionParams {
    pub capacities: BTreeMap<String, usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransversalParams {
    /// Each slot lists the students eligible for it.
    pub slots: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorParams {
    /// Student label to 0/1 attribute vector.
    pub vectors: BTreeMap<String, Vec<u8>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiversityParams {
    pub index: DiversitySpec,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiversitySpec {
    Log,
    Linear {
        coefficients: BTreeMap<String, f64>,
    },
}

pub struct CompiledSchool {
    pub id: String,
    pub capacity: usize,
    pub priority: PriorityRanking,
    pub pref: Box<dyn DistributionalPreference>,
}

pub struct CompiledInstance {
    pub ground: GroundSet,
    pub types: Option<TypeAssignment>,
    pub schools: Vec<CompiledSchool>,
    pub student_preferences: Option<Vec<StudentPreference>>,
}

impl CompiledInstance {
    pub fn school(&self, id: &str) -> Option<&CompiledSchool> {
        self.schools.iter().find(|s| s.id == id)
    }

    /// Assemble the market, when student preferences are present. Schools are
    /// rebuilt because `School` owns its preference.
    pub fn market(&self, file: &InstanceFile) -> Option<Market> {
        let prefs = self.student_preferences.clone()?;
        let schools = self
            .schools
            .iter()
            .enumerate()
            .map(|(i, s)| {
                School::new(
                    s.capacity,
                    s.priority.clone(),
                    compile_preference(
                        &file.schools[i].preference,
                        &self.ground,
                        self.types.as_ref(),
                        file.types.as_ref().map(|t| t.names.as_slice()),
                        s.capacity,
                    )
                    .expect("validated"),
                )
            })
            .collect();
        Some(Market::new(self.ground.clone(), schools, prefs))
    }

    pub fn parse_pool(&self, spec: &str) -> Result<StudentSet, String> {
        if spec == "all" {
            return Ok(self.ground.all());
        }
        let mut pool = StudentSet::EMPTY;
        for label in spec.split(',').map(str::trim).filter(|l| !l.is_empty()) {
            match self.ground.student_by_label(label) {
                Some(s) => pool = pool.with(s),
                None => return Err(format!("unknown student label {label:?} in pool")),
            }
        }
        Ok(pool)
    }
}

pub fn parse_instance(text: &str) -> Result<(InstanceFile, CompiledInstance), Vec<String>> {
    let file: InstanceFile =
        serde_json::from_str(text).map_err(|e| vec![format!("schema error: {e}")])?;
    let compiled = validate(&file)?;
    Ok((file, compiled))
}

fn validate(file: &InstanceFile) -> Result<CompiledInstance, Vec<String>> {
    let mut errors = Vec::new();
    if file.schema_version != SCHEMA_VERSION {
        errors.push(format!(
            "unsupported schema_version {} (expected {SCHEMA_VERSION})",
            file.schema_version
        ));
    }
    if file.students.is_empty() {
        errors.push("students must be non-empty".into());
    }
    if file.students.len() > 64 {
        errors.push(format!("at most 64 students supported, got {}", file.students.len()));
    }
    for (i, s) in file.students.iter().enumerate() {
        if file.students[..i].contains(s) {
            errors.push(format!("duplicate student label {s:?}"));
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    let ground = GroundSet::with_labels(file.students.clone()).map_err(|e| vec![e.to_string()])?;

    let types = file.types.as_ref().and_then(|spec| {
        let mut ok = true;
        for (i, t) in spec.names.iter().enumerate() {
            if spec.names[..i].contains(t) {
                errors.push(format!("duplicate type name {t:?}"));
                ok = false;
            }
        }
        let mut tau = Vec::with_capacity(ground.n());
        for label in file.students.iter() {
            match spec.assignment.get(label) {
                None => {
                    errors.push(format!("student {label:?} has no type assignment"));
                    ok = false;
                }
                Some(t) => match spec.names.iter().position(|x| x == t) {
                    None => {
                        errors.push(format!("student {label:?} assigned unknown type {t:?}"));
                        ok = false;
                    }
                    Some(idx) => tau.push(idx),
                },
            }
        }
        for label in spec.assignment.keys() {
            if !file.students.contains(label) {
                errors.push(format!("type assignment references unknown student {label:?}"));
                ok = false;
            }
        }
        ok.then(|| TypeAssignment::new(tau, spec.names.len()))
    });

    let mut schools = Vec::new();
    for spec in &file.schools {
        if file.schools.iter().filter(|s| s.id == spec.id).count() > 1 {
            errors.push(format!("duplicate school id {:?}", spec.id));
        }
        if spec.capacity < 1 {
            errors.push(format!("school {:?}: capacity must be >= 1", spec.id));
        }
        let mut order = Vec::with_capacity(ground.n());
        let mut priority_ok = true;
        for label in &spec.priority {
            match ground.student_by_label(label) {
                Some(s) => order.push(s),
                None => {
                    errors.push(format!(
                        "school {:?}: priority lists unknown student {label:?}",
                        spec.id
                    ));
                    priority_ok = false;
                }
            }
        }
        let priority = if priority_ok {
            match PriorityRanking::new(order) {
                Ok(p) if p.n() == ground.n() => Some(p),
                Ok(_) => {
                    errors.push(format!(
                        "school {:?}: priority must rank every student exactly once",
                        spec.id
                    ));
                    None
                }
                Err(e) => {
                    errors.push(format!("school {:?}: {e}", spec.id));
                    None
                }
            }
        } else {
            None
        };
        validate_preference(&spec.preference, &spec.id, file, &ground, types.as_ref(), &mut errors);
        if let Some(priority) = priority {
            if let Some(pref) = compile_preference(
                &spec.preference,
                &ground,
                types.as_ref(),
                file.types.as_ref().map(|t| t.names.as_slice()),
                spec.capacity,
            ) {
                schools.push(CompiledSchool {
                    id: spec.id.clone(),
                    capacity: spec.capacity,
                    priority,
                    pref,
                });
            }
        }
    }

    let student_preferences = file.student_preferences.as_ref().map(|prefs| {
        for label in prefs.keys() {
            if ground.student_by_label(label).is_none() {
                errors.push(format!("student_preferences references unknown student {label:?}"));
            }
        }
        (0..ground.n())
            .map(|s| {
                let label = ground.label(s);
                let ranked = prefs.get(&label).cloned().unwrap_or_default();
                let mut ids = Vec::new();
                for (i, c) in ranked.iter().enumerate() {
                    if ranked[..i].contains(c) {
                        errors.push(format!("student {label:?} lists school {c:?} twice"));
                        continue;
                    }
                    match file.schools.iter().position(|sch| &sch.id == c) {
                        Some(idx) => ids.push(idx),
                        None => errors.push(format!("student {label:?} lists unknown school {c:?}")),
                    }
                }
                StudentPreference::new(ids)
            })
            .collect()
    });

    if errors.is_empty() {
        Ok(CompiledInstance {
            ground,
            types,
            schools,
            student_preferences,
        })
    } else {
        Err(errors)
    }
}

fn check_bounds_maps(
    school: &str,
    floors: &BTreeMap<String, usize>,
    ceilings: &BTreeMap<String, usize>,
    file: &InstanceFile,
    errors: &mut Vec<String>,
) {
    let Some(types) = file.types.as_ref() else {
        errors.push(format!("school {school:?}: bounds preference requires a types section"));
        return;
    };
    for t in &types.names {
        let (r, p) = (floors.get(t), ceilings.get(t));
        match (r, p) {
            (Some(&r), Some(&p)) if r > p => errors.push(format!(
                "school {school:?}: type {t:?} violates r_t <= p_t ({r} > {p})"
            )),
            (None, _) => errors.push(format!("school {school:?}: missing floor for type {t:?}")),
            (_, None) => errors.push(format!("school {school:?}: missing ceiling for type {t:?}")),
            _ => {}
        }
    }
    for key in floors.keys().chain(ceilings.keys()) {
        if !types.names.contains(key) {
            errors.push(format!("school {school:?}: bounds reference unknown type {key:?}"));
        }
    }
}

fn check_values_map(
    school: &str,
    values: &BTreeMap<String, f64>,
    file: &InstanceFile,
    errors: &mut Vec<String>,
) {
    for s in &file.students {
        if !values.contains_key(s) {
            errors.push(format!("school {school:?}: missing value for student {s:?}"));
        }
    }
    for key in values.keys() {
        if !file.students.contains(key) {
            errors.push(format!("school {school:?}: value for unknown student {key:?}"));
        }
    }
}

fn validate_preference(
    spec: &PreferenceSpec,
    school: &str,
    file: &InstanceFile,
    _ground: &GroundSet,
    types: Option<&TypeAssignment>,
    errors: &mut Vec<String>,
) {
    match spec {
        PreferenceSpec::Additive(p) | PreferenceSpec::Pointwise(p) => {
            check_values_map(school, &p.values, file, errors)
        }
        PreferenceSpec::DichotomousBounds(p) => {
            check_bounds_maps(school, &p.floors, &p.ceilings, file, errors)
        }
        PreferenceSpec::SoftBounds(p) => {
            check_bounds_maps(school, &p.floors, &p.ceilings, file, errors);
            if matches!(p.floor_penalty, Some(x) if x < 1) {
                errors.push(format!("school {school:?}: floor_penalty must be >= 1"));
            }
        }
        PreferenceSpec::PartitionMatroidRank(p) => {
            let Some(spec) = file.types.as_ref() else {
                errors.push(format!(
                    "school {school:?}: partition matroid requires a types section"
                ));
                return;
            };
            for t in &spec.names {
                if !p.capacities.contains_key(t) {
                    errors.push(format!("school {school:?}: missing capacity for type {t:?}"));
                }
            }
            for key in p.capacities.keys() {
                if !spec.names.contains(key) {
                    errors.push(format!(
                        "school {school:?}: capacity for unknown type {key:?}"
                    ));
                }
            }
        }
        PreferenceSpec::TransversalMatroidRank(p) => {
            for slot in &p.slots {
                for label in slot {
                    if !file.students.contains(label) {
                        errors.push(format!(
                            "school {school:?}: slot references unknown student {label:?}"
                        ));
                    }
                }
            }
        }
        PreferenceSpec::VectorMatroidRank(p) => {
            let mut dim = None;
            for s in &file.students {
                match p.vectors.get(s) {
                    None => errors.push(format!("school {school:?}: missing vector for {s:?}")),
                    Some(v) => {
                        if *dim.get_or_insert(v.len()) != v.len() {
                            errors.push(format!(
                                "school {school:?}: vectors must share one dimension"
                            ));
                        }
                        if v.iter().any(|&x| x > 1) {
                            errors.push(format!(
                                "school {school:?}: vector entries must be 0 or 1"
                            ));
                        }
                    }
                }
            }
            for key in p.vectors.keys() {
                if !file.students.contains(key) {
                    errors.push(format!("school {school:?}: vector for unknown student {key:?}"));
                }
            }
        }
        PreferenceSpec::Diversity(p) => {
            if types.is_none() {
                errors.push(format!(
                    "school {school:?}: diversity preference requires a types section"
                ));
            }
            if let (DiversitySpec::Linear { coefficients }, Some(spec)) =
                (&p.index, file.types.as_ref())
            {
                for t in &spec.names {
                    if !coefficients.contains_key(t) {
                        errors.push(format!(
                            "school {school:?}: missing coefficient for type {t:?}"
                        ));
                    }
                }
                for key in coefficients.keys() {
                    if !spec.names.contains(key) {
                        errors.push(format!(
                            "school {school:?}: coefficient for unknown type {key:?}"
                        ));
                    }
                }
            }
        }
    }
}

/// Build the preference; returns None when prior validation already recorded
/// errors that make construction impossible.
fn compile_preference(
    spec: &PreferenceSpec,
    ground: &GroundSet,
    types: Option<&TypeAssignment>,
    type_names: Option<&[String]>,
    capacity: usize,
) -> Option<Box<dyn DistributionalPreference>> {
    let values = |m: &BTreeMap<String, f64>| -> Option<ValueFunction> {
        let v: Vec<f64> = (0..ground.n())
            .map(|s| m.get(&ground.label(s)).copied())
            .collect::<Option<_>>()?;
        Some(ValueFunction::new(v))
    };
    let bounds = |fl: &BTreeMap<String, usize>,
                  ce: &BTreeMap<String, usize>,
                  type_names: &[String]| -> Option<Bounds> {
        let floors: Vec<usize> = type_names.iter().map(|t| fl.get(t).copied()).collect::<Option<_>>()?;
        let ceilings: Vec<usize> = type_names.iter().map(|t| ce.get(t).copied()).collect::<Option<_>>()?;
        Bounds::new(floors, ceilings).ok()
    };
    match spec {
        PreferenceSpec::Additive(p) => Some(Box::new(additive_preference(values(&p.values)?))),
        PreferenceSpec::Pointwise(p) => Some(Box::new(pointwise_preference(values(&p.values)?))),
        PreferenceSpec::DichotomousBounds(p) => {
            let tau = types?.clone();
            Some(Box::new(dichotomous_bounds_preference(
                tau,
                bounds(&p.floors, &p.ceilings, type_names?)?,
            )))
        }
        PreferenceSpec::SoftBounds(p) => {
            let tau = types?.clone();
            let mut pref =
                soft_bounds_preference(tau, bounds(&p.floors, &p.ceilings, type_names?)?, capacity);
            if let Some(penalty) = p.floor_penalty {
                if penalty >= 1 {
                    pref = pref.with_floor_penalty(penalty);
                } else {
                    return None;
                }
            }
            Some(Box::new(pref))
        }
        PreferenceSpec::PartitionMatroidRank(p) => {
            let tau = types?.clone();
            let caps: Vec<usize> = type_names?
                .iter()
                .map(|t| p.capacities.get(t).copied())
                .collect::<Option<_>>()?;
            Some(Box::new(matroid_rank_preference(partition_matroid(tau, caps))))
        }
        PreferenceSpec::TransversalMatroidRank(p) => {
            let slots: Vec<StudentSet> = p
                .slots
                .iter()
                .map(|slot| {
                    slot.iter()
                        .map(|l| ground.student_by_label(l))
                        .collect::<Option<Vec<_>>>()
                        .map(|v| v.into_iter().collect())
                })
                .collect::<Option<_>>()?;
            Some(Box::new(matroid_rank_preference(transversal_matroid(
                ground.n(),
                slots,
            ))))
        }
        PreferenceSpec::VectorMatroidRank(p) => {
            let vectors: Vec<Vec<u8>> = (0..ground.n())
                .map(|s| p.vectors.get(&ground.label(s)).cloned())
                .collect::<Option<_>>()?;
            Some(Box::new(matroid_rank_preference(vector_matroid(vectors))))
        }
        PreferenceSpec::Diversity(p) => {
            let tau = types?.clone();
            let index = match &p.index {
                DiversitySpec::Log => DiversityIndex::log(capacity),
                DiversitySpec::Linear { coefficients } => {
                    let coeffs: Vec<f64> = type_names?
                        .iter()
                        .map(|t| coefficients.get(t).copied())
                        .collect::<Option<_>>()?;
                    DiversityIndex::linear(capacity, coeffs)
                }
            };
            Some(Box::new(diversity_preference(tau, index)))
        }
    }
}
