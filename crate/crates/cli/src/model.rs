//! JSON model bundles: parsing with field-level error positions, and emitting
//! the built-in fixtures.

use crate::CliError;
use eqdescent::abgroup::{FgAbelianGroup, Int, IntMatrix};
use eqdescent::fixtures::{self, Fixture};
use eqdescent::gcoh::FiniteGroup;
use eqdescent::possite::{Cover, EquivariantSheaf, GTorsorCocycle, MonotoneMap, PosetSite, SiteCochain, SiteComplex};
use serde_json::{json, Map, Value};

/// Everything a command may need, cross-checked on load.
#[derive(Clone, Debug)]
pub struct ModelBundle {
    pub site: PosetSite,
    pub group: FiniteGroup,
    pub sheaf: EquivariantSheaf,
    pub gtorsor: Option<GTorsorCocycle>,
    /// Plain sheaf the model was built from: on the base for `E[M]`, on the
    /// cover for pushforwards.
    pub coefficients: Option<EquivariantSheaf>,
    pub cover: Option<Cover>,
    /// Free-form defaults such as `{"degree": 1}`.
    pub task: Map<String, Value>,
}

/// Parsing context: file name and raw text for locating fields.
struct Src<'a> {
    path: &'a str,
    text: &'a str,
}

impl Src<'_> {
    /// Line and column of the first occurrence of `"key"`, 1-based.
    fn locate(&self, key: &str) -> (usize, usize) {
        let needle = format!("\"{key}\"");
        match self.text.find(&needle) {
            Some(off) => {
                let before = &self.text[..off];
                let line = before.matches('\n').count() + 1;
                let col = off - before.rfind('\n').map_or(0, |p| p + 1) + 1;
                (line, col)
            }
            None => (0, 0),
        }
    }

    fn err(&self, field: &str, key: &str, msg: impl Into<String>) -> CliError {
        let (line, column) = self.locate(key);
        CliError::Field { path: self.path.into(), field: field.into(), line, column, msg: msg.into() }
    }
}

fn obj<'v>(src: &Src, v: &'v Value, field: &str, key: &str) -> Result<&'v Map<String, Value>, CliError> {
    v.as_object().ok_or_else(|| src.err(field, key, "expected an object"))
}

fn arr<'v>(src: &Src, v: &'v Value, field: &str, key: &str) -> Result<&'v Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| src.err(field, key, "expected an array"))
}

fn string<'v>(src: &Src, v: &'v Value, field: &str, key: &str) -> Result<&'v str, CliError> {
    v.as_str().ok_or_else(|| src.err(field, key, "expected a string"))
}

fn int(src: &Src, v: &Value, field: &str, key: &str) -> Result<Int, CliError> {
    if let Some(i) = v.as_i64() {
        return Ok(Int::from(i));
    }
    if let Some(s) = v.as_str() {
        if let Ok(b) = s.parse::<Int>() {
            return Ok(b);
        }
    }
    Err(src.err(field, key, "expected an integer"))
}

fn usize_of(src: &Src, v: &Value, field: &str, key: &str) -> Result<usize, CliError> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| src.err(field, key, "expected a non-negative integer"))
}

fn int_vec(src: &Src, v: &Value, field: &str, key: &str) -> Result<Vec<Int>, CliError> {
    arr(src, v, field, key)?.iter().map(|x| int(src, x, field, key)).collect()
}

/// Row-major integer matrix with the expected shape.
fn matrix(src: &Src, v: &Value, rows: usize, cols: usize, field: &str, key: &str) -> Result<IntMatrix, CliError> {
    let rs = arr(src, v, field, key)?;
    if rs.len() != rows {
        return Err(src.err(field, key, format!("matrix has {} rows, expected {rows}", rs.len())));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for r in rs {
        let row = int_vec(src, r, field, key)?;
        if row.len() != cols {
            return Err(src.err(field, key, format!("matrix row has {} entries, expected {cols}", row.len())));
        }
        data.extend(row);
    }
    Ok(IntMatrix::from_data(rows, cols, data))
}

fn int_json(x: &Int) -> Value {
    match x.to_i64() {
        Some(i) => json!(i),
        None => json!(x.to_string()),
    }
}

fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(int_json).collect())).collect())
}

fn parse_poset(src: &Src, v: &Value, field: &str) -> Result<PosetSite, CliError> {
    let o = obj(src, v, field, field)?;
    let pts = o.get("points").ok_or_else(|| src.err(&format!("{field}.points"), field, "missing"))?;
    let names: Vec<String> = arr(src, pts, &format!("{field}.points"), "points")?
        .iter()
        .map(|p| string(src, p, &format!("{field}.points"), "points").map(String::from))
        .collect::<Result<_, _>>()?;
    let idx = |name: &str, f: &str| -> Result<usize, CliError> {
        names.iter().position(|n| n == name).ok_or_else(|| src.err(f, name, format!("unknown point {name:?}")))
    };
    let mut pairs = Vec::new();
    if let Some(l) = o.get("leq") {
        let f = format!("{field}.leq");
        for p in arr(src, l, &f, "leq")? {
            let pr = arr(src, p, &f, "leq")?;
            if pr.len() != 2 {
                return Err(src.err(&f, "leq", "each entry must be a pair [a, b]"));
            }
            let a = string(src, &pr[0], &f, "leq")?;
            let b = string(src, &pr[1], &f, "leq")?;
            pairs.push((idx(a, &f)?, idx(b, &f)?));
        }
    }
    PosetSite::new(names, &pairs).map_err(|e| CliError::Validation { path: src.path.into(), what: field.into(), msg: e.to_string() })
}

fn poset_json(site: &PosetSite) -> Value {
    let leq: Vec<Value> =
        site.covering_pairs().iter().map(|&(a, b)| json!([site.name(a), site.name(b)])).collect();
    json!({ "points": site.names(), "leq": leq })
}

fn parse_group(src: &Src, v: Option<&Value>) -> Result<FiniteGroup, CliError> {
    let Some(v) = v else { return Ok(FiniteGroup::trivial()) };
    let o = obj(src, v, "group", "group")?;
    let el = o.get("elements").ok_or_else(|| src.err("group.elements", "group", "missing"))?;
    let names: Vec<String> = arr(src, el, "group.elements", "elements")?
        .iter()
        .map(|p| string(src, p, "group.elements", "elements").map(String::from))
        .collect::<Result<_, _>>()?;
    let tv = o.get("table").ok_or_else(|| src.err("group.table", "group", "missing"))?;
    let mut table = Vec::new();
    for row in arr(src, tv, "group.table", "table")? {
        let mut r = Vec::new();
        for x in arr(src, row, "group.table", "table")? {
            let s = string(src, x, "group.table", "table")?;
            r.push(names.iter().position(|n| n == s).ok_or_else(|| src.err("group.table", "table", format!("unknown element {s:?}")))?);
        }
        table.push(r);
    }
    FiniteGroup::new(names, table).map_err(|e| CliError::Validation { path: src.path.into(), what: "group".into(), msg: e.to_string() })
}

fn group_json(g: &FiniteGroup) -> Value {
    let table: Vec<Vec<&str>> = (0..g.order()).map(|a| (0..g.order()).map(|b| g.name(g.mul(a, b))).collect()).collect();
    json!({ "elements": g.names(), "table": table })
}

fn element(src: &Src, g: &FiniteGroup, v: &Value, field: &str) -> Result<usize, CliError> {
    let s = string(src, v, field, field)?;
    g.index_of(s).ok_or_else(|| src.err(field, s, format!("unknown group element {s:?}")))
}

/// `{rank, torsion}` (torsion generators first), `{moduli}` or
/// `{generators, relations}`.
fn parse_stalk(src: &Src, v: &Value, field: &str, key: &str) -> Result<FgAbelianGroup, CliError> {
    let o = obj(src, v, field, key)?;
    if let Some(m) = o.get("moduli") {
        return Ok(FgAbelianGroup::from_moduli(&int_vec(src, m, field, key)?));
    }
    if let Some(r) = o.get("relations") {
        let n = usize_of(src, o.get("generators").unwrap_or(&Value::Null), field, key)?;
        let rows = arr(src, r, field, key)?;
        let cols = rows.first().and_then(|x| x.as_array()).map_or(0, |x| x.len());
        let m = matrix(src, r, n, cols, field, key)?;
        return FgAbelianGroup::new(n, m).map_err(|e| src.err(field, key, e.to_string()));
    }
    let rank = match o.get("rank") {
        Some(r) => usize_of(src, r, field, key)?,
        None => 0,
    };
    let mut moduli = match o.get("torsion") {
        Some(t) => int_vec(src, t, field, key)?,
        None => Vec::new(),
    };
    if moduli.iter().any(|m| m.is_zero()) {
        return Err(src.err(field, key, "torsion orders must be nonzero"));
    }
    moduli.extend(std::iter::repeat(Int::ZERO).take(rank));
    Ok(FgAbelianGroup::from_moduli(&moduli))
}

fn stalk_json(g: &FgAbelianGroup) -> Value {
    match g.diagonal_orders() {
        Some(m) => {
            let t = m.iter().take_while(|x| !x.is_zero()).count();
            let canonical = m[..t].iter().all(|x| !x.is_one()) && m[t..].iter().all(|x| x.is_zero());
            if canonical {
                json!({ "rank": m.len() - t, "torsion": m[..t].iter().map(int_json).collect::<Vec<_>>() })
            } else {
                json!({ "moduli": m.iter().map(int_json).collect::<Vec<_>>() })
            }
        }
        None => json!({ "generators": g.ngens(), "relations": matrix_json(g.relations()) }),
    }
}

fn parse_pair(src: &Src, site: &PosetSite, key: &str, field: &str) -> Result<(usize, usize), CliError> {
    let (a, b) = key.split_once("<=").ok_or_else(|| src.err(field, key, "pair keys look like \"a<=b\""))?;
    let pa = site.point(a.trim()).map_err(|e| src.err(field, key, e.to_string()))?;
    let pb = site.point(b.trim()).map_err(|e| src.err(field, key, e.to_string()))?;
    Ok((pa, pb))
}

fn parse_sheaf(src: &Src, v: &Value, field: &str, site: &PosetSite, group: &FiniteGroup) -> Result<EquivariantSheaf, CliError> {
    let o = obj(src, v, field, field)?;
    let sf = format!("{field}.stalks");
    let st = obj(src, o.get("stalks").ok_or_else(|| src.err(&sf, field, "missing"))?, &sf, "stalks")?;
    let mut stalks = Vec::with_capacity(site.len());
    for name in site.names() {
        let s = st.get(name).ok_or_else(|| src.err(&sf, "stalks", format!("no stalk for point {name:?}")))?;
        stalks.push(parse_stalk(src, s, &format!("{sf}.{name}"), name)?);
    }
    if let Some(extra) = st.keys().find(|k| site.index_of(k).is_none()) {
        return Err(src.err(&sf, extra, format!("unknown point {extra:?}")));
    }
    let rf = format!("{field}.restrictions");
    let mut restrictions = Vec::new();
    if let Some(r) = o.get("restrictions") {
        for (k, m) in obj(src, r, &rf, "restrictions")? {
            let (a, b) = parse_pair(src, site, k, &rf)?;
            let mat = matrix(src, m, stalks[b].ngens(), stalks[a].ngens(), &format!("{rf}.{k}"), k)?;
            restrictions.push(((a, b), mat));
        }
    }
    let action = match o.get("action") {
        None => None,
        Some(a) => {
            let af = format!("{field}.action");
            let a = obj(src, a, &af, "action")?;
            let mut act: Vec<Vec<IntMatrix>> =
                (0..group.order()).map(|_| stalks.iter().map(|s| IntMatrix::identity(s.ngens())).collect()).collect();
            for (gname, per) in a {
                let g = group.index_of(gname).ok_or_else(|| src.err(&af, gname, format!("unknown group element {gname:?}")))?;
                for (pname, m) in obj(src, per, &af, gname)? {
                    let x = site.point(pname).map_err(|e| src.err(&af, pname, e.to_string()))?;
                    let k = stalks[x].ngens();
                    act[g][x] = matrix(src, m, k, k, &format!("{af}.{gname}.{pname}"), pname)?;
                }
            }
            Some(act)
        }
    };
    EquivariantSheaf::new(site, group, stalks, restrictions, action)
        .map_err(|e| CliError::Validation { path: src.path.into(), what: field.into(), msg: e.to_string() })
}

fn sheaf_json(f: &EquivariantSheaf) -> Value {
    let site = f.site();
    let mut stalks = Map::new();
    for x in 0..site.len() {
        stalks.insert(site.name(x).into(), stalk_json(f.stalk(x)));
    }
    let mut restr = Map::new();
    for &(a, b) in site.covering_pairs() {
        restr.insert(format!("{}<={}", site.name(a), site.name(b)), matrix_json(f.restriction(a, b).matrix()));
    }
    let mut out = Map::new();
    out.insert("stalks".into(), Value::Object(stalks));
    out.insert("restrictions".into(), Value::Object(restr));
    let g = f.group();
    let mut action = Map::new();
    for e in 1..g.order() {
        let mut per = Map::new();
        for x in 0..site.len() {
            let m = f.action(e, x).matrix();
            if *m != IntMatrix::identity(f.stalk(x).ngens()) {
                per.insert(site.name(x).into(), matrix_json(m));
            }
        }
        if !per.is_empty() {
            action.insert(g.name(e).into(), Value::Object(per));
        }
    }
    if !action.is_empty() {
        out.insert("action".into(), Value::Object(action));
    }
    Value::Object(out)
}

fn parse_gtorsor(src: &Src, v: &Value, site: &PosetSite, group: &FiniteGroup) -> Result<GTorsorCocycle, CliError> {
    let o = obj(src, v, "gtorsor", "gtorsor")?;
    let mut trans = Vec::new();
    if let Some(t) = o.get("transitions") {
        for (k, g) in obj(src, t, "gtorsor.transitions", "transitions")? {
            let pair = parse_pair(src, site, k, "gtorsor.transitions")?;
            trans.push((pair, element(src, group, g, "gtorsor.transitions")?));
        }
    }
    for &(a, b) in site.covering_pairs() {
        if !trans.iter().any(|(p, _)| *p == (a, b)) {
            trans.push(((a, b), 0));
        }
    }
    GTorsorCocycle::new(site, group, &trans)
        .map_err(|e| CliError::Validation { path: src.path.into(), what: "gtorsor".into(), msg: e.to_string() })
}

fn gtorsor_json(m: &GTorsorCocycle) -> Value {
    let site = m.site();
    let mut t = Map::new();
    for ((a, b), g) in m.transitions() {
        if g != 0 {
            t.insert(format!("{}<={}", site.name(a), site.name(b)), json!(m.group().name(g)));
        }
    }
    json!({ "transitions": t })
}

fn parse_cover(src: &Src, v: &Value, base: &PosetSite, group: &FiniteGroup) -> Result<Cover, CliError> {
    let o = obj(src, v, "cover", "cover")?;
    let total = parse_poset(src, o.get("poset").ok_or_else(|| src.err("cover.poset", "cover", "missing"))?, "cover.poset")?;
    let mv = obj(src, o.get("map").ok_or_else(|| src.err("cover.map", "cover", "missing"))?, "cover.map", "map")?;
    let mut map = Vec::with_capacity(total.len());
    for name in total.names() {
        let t = mv.get(name).ok_or_else(|| src.err("cover.map", "map", format!("no image for point {name:?}")))?;
        let t = string(src, t, "cover.map", name)?;
        map.push(base.point(t).map_err(|e| src.err("cover.map", t, e.to_string()))?);
    }
    let mm = MonotoneMap::new(&total, base, map)
        .map_err(|e| CliError::Validation { path: src.path.into(), what: "cover.map".into(), msg: e.to_string() })?;
    let mut deck: Vec<Vec<usize>> = (0..group.order()).map(|_| (0..total.len()).collect()).collect();
    if let Some(d) = o.get("deck") {
        for (gname, perm) in obj(src, d, "cover.deck", "deck")? {
            let g = group.index_of(gname).ok_or_else(|| src.err("cover.deck", gname, format!("unknown group element {gname:?}")))?;
            for (a, b) in obj(src, perm, "cover.deck", gname)? {
                let pa = total.point(a).map_err(|e| src.err("cover.deck", a, e.to_string()))?;
                let b = string(src, b, "cover.deck", a)?;
                deck[g][pa] = total.point(b).map_err(|e| src.err("cover.deck", b, e.to_string()))?;
            }
        }
    }
    Cover::new(mm, group, deck).map_err(|e| CliError::Validation { path: src.path.into(), what: "cover".into(), msg: e.to_string() })
}

fn cover_json(c: &Cover) -> Value {
    let total = &c.map.source;
    let mut map = Map::new();
    for z in 0..total.len() {
        map.insert(total.name(z).into(), json!(c.map.target.name(c.map.map[z])));
    }
    let mut deck = Map::new();
    for g in 1..c.group.order() {
        let mut perm = Map::new();
        for z in 0..total.len() {
            if c.deck[g][z] != z {
                perm.insert(total.name(z).into(), json!(total.name(c.deck[g][z])));
            }
        }
        deck.insert(c.group.name(g).into(), Value::Object(perm));
    }
    json!({ "poset": poset_json(total), "map": map, "deck": deck })
}

fn merge(values: Vec<(String, String, Value)>) -> Result<(String, String, Map<String, Value>), CliError> {
    let mut all = Map::new();
    let mut text = String::new();
    let mut paths = Vec::new();
    for (path, t, v) in values {
        let Value::Object(o) = v else {
            return Err(CliError::Field { path, field: "<root>".into(), line: 1, column: 1, msg: "expected an object".into() });
        };
        for (k, v) in o {
            if all.contains_key(&k) {
                return Err(CliError::Field { path, field: k, line: 0, column: 0, msg: "defined in more than one file".into() });
            }
            all.insert(k, v);
        }
        text.push_str(&t);
        paths.push(path);
    }
    Ok((paths.join(","), text, all))
}

/// Parses one or more JSON documents whose top-level keys are merged.
pub fn parse_bundle(docs: &[(String, String)]) -> Result<ModelBundle, CliError> {
    let mut values = Vec::with_capacity(docs.len());
    for (path, text) in docs {
        let v: Value = serde_json::from_str(text).map_err(|e| CliError::Json {
            path: path.clone(),
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        })?;
        values.push((path.clone(), text.clone(), v));
    }
    let (path, text, all) = merge(values)?;
    let src = Src { path: &path, text: &text };
    let known = ["poset", "group", "sheaf", "gtorsor", "coefficients", "cover", "task"];
    if let Some(k) = all.keys().find(|k| !known.contains(&k.as_str())) {
        return Err(src.err(k, k, "unknown top-level field"));
    }
    let site = parse_poset(&src, all.get("poset").ok_or_else(|| src.err("poset", "poset", "missing"))?, "poset")?;
    let group = parse_group(&src, all.get("group"))?;
    let sheaf = parse_sheaf(&src, all.get("sheaf").ok_or_else(|| src.err("sheaf", "sheaf", "missing"))?, "sheaf", &site, &group)?;
    let gtorsor = all.get("gtorsor").map(|v| parse_gtorsor(&src, v, &site, &group)).transpose()?;
    let cover = all.get("cover").map(|v| parse_cover(&src, v, &site, &group)).transpose()?;
    let coefficients = match all.get("coefficients") {
        None => None,
        Some(v) => {
            let on = match (&gtorsor, &cover) {
                (None, Some(c)) => &c.map.source,
                _ => &site,
            };
            Some(parse_sheaf(&src, v, "coefficients", on, &FiniteGroup::trivial())?)
        }
    };
    let task = match all.get("task") {
        None => Map::new(),
        Some(t) => obj(&src, t, "task", "task")?.clone(),
    };
    Ok(ModelBundle { site, group, sheaf, gtorsor, coefficients, cover, task })
}

pub fn bundle_json(b: &ModelBundle) -> Value {
    let mut out = Map::new();
    out.insert("poset".into(), poset_json(&b.site));
    out.insert("group".into(), group_json(&b.group));
    out.insert("sheaf".into(), sheaf_json(&b.sheaf));
    if let Some(m) = &b.gtorsor {
        out.insert("gtorsor".into(), gtorsor_json(m));
    }
    if let Some(c) = &b.cover {
        out.insert("cover".into(), cover_json(c));
    }
    if let Some(e) = &b.coefficients {
        out.insert("coefficients".into(), sheaf_json(e));
    }
    if !b.task.is_empty() {
        out.insert("task".into(), Value::Object(b.task.clone()));
    }
    Value::Object(out)
}

impl From<Fixture> for ModelBundle {
    fn from(f: Fixture) -> ModelBundle {
        ModelBundle {
            site: f.base,
            group: f.group,
            sheaf: f.sheaf,
            gtorsor: f.gtorsor,
            coefficients: Some(f.coefficients),
            cover: f.cover,
            task: Map::new(),
        }
    }
}

/// Model JSON for a built-in fixture.
pub fn emit_model(name: &str) -> Result<Value, CliError> {
    let f = fixtures::by_name(name).ok_or_else(|| CliError::UnknownExample { name: name.into() })?;
    Ok(bundle_json(&ModelBundle::from(f)))
}

/// A cocycle file: `{"degree": q, "values": {"a<b": [..], ..}}` with
/// missing chains zero, or `{"degree": q, "class": [..]}` naming a class.
pub fn parse_cochain(path: &str, text: &str, cx: &SiteComplex) -> Result<SiteCochain, CliError> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| CliError::Json { path: path.into(), line: e.line(), column: e.column(), msg: e.to_string() })?;
    let src = Src { path, text };
    let o = obj(&src, &v, "<root>", "degree")?;
    let q = usize_of(&src, o.get("degree").ok_or_else(|| src.err("degree", "degree", "missing"))?, "degree", "degree")?;
    if q > cx.top() {
        return Err(src.err("degree", "degree", format!("degree {q} exceeds the longest chain ({})", cx.top())));
    }
    if let Some(c) = o.get("class") {
        let h = cx.cohomology(q);
        let coords = int_vec(&src, c, "class", "class")?;
        if coords.len() != h.group().ngens() {
            return Err(src.err("class", "class", format!("expected {} coordinates for {}", h.group().ngens(), h.render())));
        }
        return Ok(cx.rep_of(q, &coords));
    }
    let site = cx.sheaf().site();
    let mut entries = Vec::new();
    if let Some(vals) = o.get("values") {
        for (label, val) in obj(&src, vals, "values", "values")? {
            let chain = site.parse_chain(label).map_err(|e| src.err("values", label, e.to_string()))?;
            entries.push((chain, int_vec(&src, val, "values", label)?));
        }
    }
    cx.cochain_from_entries(q, &entries).map_err(|e| src.err("values", "values", e.to_string()))
}

/// The cochain file for `z`, listing nonzero chains only.
pub fn cochain_json(cx: &SiteComplex, z: &SiteCochain) -> Value {
    let site = cx.sheaf().site();
    let mut vals = Map::new();
    for (c, v) in cx.entries(z) {
        vals.insert(site.chain_label(&c), Value::Array(v.iter().map(int_json).collect()));
    }
    json!({ "degree": z.degree, "values": vals })
}
