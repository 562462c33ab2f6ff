use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::isomorphism::{cover_key, CoverKey};
use super::quotients::{bielliptic_involutions, quotient_datum, Involution, QuotientDatum};
use super::superspecial::{list_superspecial_for_model, ChartSolution};
use super::EnumerationError;
use crate::curves::{supersingular_models, CurveError, DcecInstance, EllipticModel};
use crate::ff::FieldElement;

/// Translations used when comparing double covers: `E[3]`, the translations
/// induced by linear maps of the plane preserving the cubic.
pub const TRANSLATION_ORDER: i64 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CurveType {
    #[serde(rename = "UDCEC")]
    Udcec,
    Howe,
    Other,
}

impl std::fmt::Display for CurveType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CurveType::Udcec => "UDCEC",
            CurveType::Howe => "Howe",
            CurveType::Other => "Other",
        })
    }
}

/// UDCEC when there is no second elliptic quotient; Howe when two of the
/// bielliptic involutions commute; Other otherwise.
pub fn classify_type(c: &DcecInstance, quotients: &[QuotientDatum]) -> CurveType {
    if quotients.is_empty() {
        return CurveType::Udcec;
    }
    let tower = c.tower();
    let mut invs = vec![Involution::defining(&c.field())];
    invs.extend(quotients.iter().map(|q| q.involution.clone()));
    for i in 0..invs.len() {
        for j in i + 1..invs.len() {
            if invs[i].commutes_with(&invs[j], &tower) {
                return CurveType::Howe;
            }
        }
    }
    CurveType::Other
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub all: usize,
    pub udcec: usize,
    pub howe: usize,
    pub other: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassSummary {
    pub id: usize,
    pub j: FieldElement,
    /// Coefficients of `q` for the representative, normalized.
    pub a: Vec<FieldElement>,
    /// Degree over F_p of the field generated by the representative's coefficients.
    pub field_degree: usize,
    #[serde(rename = "type")]
    pub kind: CurveType,
    /// Number of enumerated quadrics in the class.
    pub members: usize,
    /// Number of bielliptic involutions.
    pub involutions: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelSummary {
    pub j: FieldElement,
    #[serde(rename = "A")]
    pub a: FieldElement,
    #[serde(rename = "B")]
    pub b: FieldElement,
    /// Points found and quotient dimension, summed over the charts.
    pub solutions: usize,
    pub dimension: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub p: u32,
    pub supersingular: Vec<ModelSummary>,
    pub raw_count: usize,
    pub classes: Vec<ClassSummary>,
    pub counts: Counts,
    pub radical: bool,
    pub timings: BTreeMap<String, f64>,
}

impl EnumerationReport {
    /// The report without timings, for comparing runs.
    pub fn canonical_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).unwrap();
        v.as_object_mut().unwrap().remove("timings");
        v
    }
}

#[derive(Clone, Debug)]
pub struct EnumerateOptions {
    /// Order of the translations allowed in isomorphisms of covers.
    pub translation_order: i64,
    /// Directory for per-model partial results, `p<p>/j<j>.json` below it.
    pub checkpoint_dir: Option<PathBuf>,
    /// Worker threads for the per-model searches; 0 or 1 runs sequentially.
    pub workers: usize,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { translation_order: TRANSLATION_ORDER, checkpoint_dir: None, workers: 1 }
    }
}

/// A curve found by the enumeration together with its involutions and
/// quotients.
#[derive(Clone, Debug)]
pub struct ClassifiedCurve {
    pub curve: DcecInstance,
    pub quotients: Vec<QuotientDatum>,
    pub kind: CurveType,
    pub key: CoverKey,
}

pub fn classify_curve(c: &DcecInstance, translation_order: i64) -> Result<ClassifiedCurve, EnumerationError> {
    let invs = bielliptic_involutions(c)?;
    if !invs.iter().any(|i| i.is_defining()) {
        return Err(EnumerationError::Inconsistent("defining involution not found".into()));
    }
    let quotients: Vec<QuotientDatum> =
        invs.iter().filter(|i| !i.is_defining()).map(|i| quotient_datum(c, i)).collect::<Result<_, _>>()?;
    for q in &quotients {
        if !(q.curve.is_nonsingular() && q.curve.is_superspecial()) {
            return Err(EnumerationError::Inconsistent("a quotient form is not superspecial".into()));
        }
    }
    let kind = classify_type(c, &quotients);
    let key = cover_key(c, translation_order)?;
    Ok(ClassifiedCurve { curve: c.clone(), quotients, kind, key })
}

fn j_label(j: &FieldElement) -> String {
    j.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("_")
}

fn checkpoint_path(dir: &Path, p: u32, j: &FieldElement) -> PathBuf {
    dir.join(format!("p{p}")).join(format!("j{}.json", j_label(j)))
}

fn solutions_to_json(model: &EllipticModel, sols: &[ChartSolution]) -> serde_json::Value {
    json!({
        "p": model.p,
        "A": model.a,
        "B": model.b,
        "charts": sols.iter().map(|s| json!({
            "chart": s.chart,
            "dimension": s.dimension,
            "curves": s.curves.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

fn solutions_from_json(model: &EllipticModel, v: &serde_json::Value) -> Result<Vec<ChartSolution>, EnumerationError> {
    let bad = || EnumerationError::Io("malformed checkpoint".into());
    let a: FieldElement = serde_json::from_value(v["A"].clone()).map_err(|_| bad())?;
    let b: FieldElement = serde_json::from_value(v["B"].clone()).map_err(|_| bad())?;
    if a != model.a || b != model.b {
        return Err(bad());
    }
    let mut out = vec![];
    for ch in v["charts"].as_array().ok_or_else(bad)? {
        let curves = ch["curves"]
            .as_array()
            .ok_or_else(bad)?
            .iter()
            .map(DcecInstance::from_json)
            .collect::<Result<Vec<_>, CurveError>>()?;
        out.push(ChartSolution {
            chart: ch["chart"].as_u64().ok_or_else(bad)? as usize,
            dimension: ch["dimension"].as_u64().ok_or_else(bad)? as usize,
            curves,
        });
    }
    Ok(out)
}

/// Superspecial curves over one model, read from or written to the
/// checkpoint directory when one is given.
pub fn solutions_for_model(model: &EllipticModel, dir: Option<&Path>) -> Result<Vec<ChartSolution>, EnumerationError> {
    let j = model.j_invariant_descended();
    if let Some(dir) = dir {
        let path = checkpoint_path(dir, model.p, &j);
        if let Ok(text) = std::fs::read_to_string(&path) {
            let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| EnumerationError::Io(e.to_string()))?;
            return solutions_from_json(model, &v);
        }
    }
    let sols = list_superspecial_for_model(model)?;
    if let Some(dir) = dir {
        let path = checkpoint_path(dir, model.p, &j);
        std::fs::create_dir_all(path.parent().unwrap()).map_err(|e| EnumerationError::Io(e.to_string()))?;
        let tmp = path.with_extension("json.tmp");
        std::fs::write(&tmp, serde_json::to_string(&solutions_to_json(model, &sols)).unwrap())
            .map_err(|e| EnumerationError::Io(e.to_string()))?;
        std::fs::rename(&tmp, &path).map_err(|e| EnumerationError::Io(e.to_string()))?;
    }
    Ok(sols)
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut i = i;
    while parent[i] != r {
        let next = parent[i];
        parent[i] = r;
        i = next;
    }
    r
}

// runs `f` on every item, on up to `workers` threads, keeping input order
fn map_workers<T: Sync, U: Send>(
    items: &[T],
    workers: usize,
    f: impl Fn(&T) -> Result<U, EnumerationError> + Sync,
) -> Result<Vec<U>, EnumerationError> {
    if workers <= 1 || items.len() <= 1 {
        return items.iter().map(&f).collect();
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let results: Vec<std::sync::Mutex<Option<Result<U, EnumerationError>>>> =
        items.iter().map(|_| std::sync::Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..workers.min(items.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                if i >= items.len() {
                    break;
                }
                *results[i].lock().unwrap() = Some(f(&items[i]));
            });
        }
    });
    results.into_iter().map(|m| m.into_inner().unwrap().unwrap()).collect()
}

/// All superspecial curves for `p` up to isomorphism.
pub fn enumerate(p: u32, opts: &EnumerateOptions) -> Result<EnumerationReport, EnumerationError> {
    let mut timings = BTreeMap::new();
    let start = Instant::now();
    let models = supersingular_models(p)?;
    let dir = opts.checkpoint_dir.as_deref();
    let per_model = map_workers(&models, opts.workers, |m| solutions_for_model(m, dir))?;
    timings.insert("groebner".to_string(), start.elapsed().as_secs_f64());

    let mut supersingular = vec![];
    let mut raw: Vec<DcecInstance> = vec![];
    let mut radical = true;
    for (m, sols) in models.iter().zip(&per_model) {
        let solutions: usize = sols.iter().map(|s| s.curves.len()).sum();
        let dimension: usize = sols.iter().map(|s| s.dimension).sum();
        radical &= solutions == dimension;
        supersingular.push(ModelSummary { j: m.j_invariant_descended(), a: m.a.clone(), b: m.b.clone(), solutions, dimension });
        for s in sols {
            for c in &s.curves {
                let c = c.normalized().descend();
                if !(c.is_nonsingular() && c.is_superspecial()) {
                    return Err(EnumerationError::Inconsistent(format!("solution fails re-verification: {}", c.to_json())));
                }
                raw.push(c);
            }
        }
    }
    raw.sort_by(|x, y| sort_key(x).cmp(&sort_key(y)));
    raw.dedup();

    let t = Instant::now();
    let classified = map_workers(&raw, opts.workers, |c| classify_curve(c, opts.translation_order))?;
    timings.insert("quotients".to_string(), t.elapsed().as_secs_f64());

    let t = Instant::now();
    let mut parent: Vec<usize> = (0..raw.len()).collect();
    let mut by_key: HashMap<&CoverKey, usize> = HashMap::new();
    for (i, c) in classified.iter().enumerate() {
        if let Some(&j) = by_key.get(&c.key) {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a.max(b)] = a.min(b);
        } else {
            by_key.insert(&c.key, i);
        }
    }
    for (i, c) in classified.iter().enumerate() {
        for q in &c.quotients {
            let key = cover_key(&q.curve, opts.translation_order)?;
            let Some(&j) = by_key.get(&key) else {
                return Err(EnumerationError::Inconsistent(format!(
                    "a quotient form of {} is missing from the enumeration",
                    c.curve.to_json()
                )));
            };
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..raw.len() {
        let r = find(&mut parent, i);
        members.entry(r).or_default().push(i);
    }
    let mut classes = vec![];
    let mut counts = Counts::default();
    for (id, (rep, idx)) in members.iter().enumerate() {
        let c = &classified[*rep];
        for &i in idx {
            let o = &classified[i];
            if o.kind != c.kind || o.quotients.len() != c.quotients.len() {
                return Err(EnumerationError::Inconsistent("isomorphic curves classified differently".into()));
            }
        }
        counts.all += 1;
        match c.kind {
            CurveType::Udcec => counts.udcec += 1,
            CurveType::Howe => counts.howe += 1,
            CurveType::Other => counts.other += 1,
        }
        classes.push(ClassSummary {
            id,
            j: c.curve.model.j_invariant_descended(),
            a: c.curve.a.clone(),
            field_degree: c.curve.level(),
            kind: c.kind,
            members: idx.len(),
            involutions: c.quotients.len() + 1,
        });
    }
    timings.insert("classes".to_string(), t.elapsed().as_secs_f64());
    timings.insert("total".to_string(), start.elapsed().as_secs_f64());
    Ok(EnumerationReport { p, supersingular, raw_count: raw.len(), classes, counts, radical, timings })
}

fn sort_key(c: &DcecInstance) -> (FieldElement, usize, Vec<FieldElement>) {
    (c.model.j_invariant_descended(), c.level(), c.a.clone())
}

/// Whether the superspecial ideal over `model` is radical after inverting
/// `f2`: number of points and the quotient dimension, summed over charts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadicalityWitness {
    pub points: usize,
    pub dimension: usize,
    pub radical: bool,
}

pub fn check_radicality(model: &EllipticModel) -> Result<RadicalityWitness, EnumerationError> {
    let sols = list_superspecial_for_model(model)?;
    let points = sols.iter().map(|s| s.curves.len()).sum();
    let dimension = sols.iter().map(|s| s.dimension).sum();
    Ok(RadicalityWitness { points, dimension, radical: points == dimension })
}
