use std::fmt::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use serde_json::{json, Value};
use stuffle_core::classify::{
    enumerate_f3_tables, enumerate_weak_shuffles, grid_01, grid_ext, iso_phi, iso_psi, match_all, orbits, psi_letter,
    square_zero_dim, valzeroun_case, verify_morphism, DiagonalMap,
};
use stuffle_core::laws::{
    check_associative, check_characterization, check_commutative, check_dendriform, check_end_equality,
    check_hopf_compat, check_quadri_on, check_stuffle_relations, quadri_words,
};
use stuffle_core::leading::{leading_statement, square_zero_certificate, Certificate};
use stuffle_core::table::{parse_spec, table_to_json, DEFAULT_MAX_INDEX};
use stuffle_core::{
    builtin_spec, table_from_tuple, CheckError, CheckReport, Engine, F3Map, ProductError, Rational, Spec, SpecError,
    StuffleTable, Table,
};

use crate::{CheckKind, Format, Grid, MapKind, SpecArgs};

pub struct Outcome {
    pub output: String,
    pub passed: bool,
}

pub struct CliError {
    pub message: String,
    pub code: u8,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { message: message.into(), code: 2 }
    }
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        CliError::usage(e.to_string())
    }
}

impl From<ProductError> for CliError {
    fn from(e: ProductError) -> Self {
        let code = match e {
            ProductError::Overflow { .. } => 1,
            ProductError::LetterOutOfRange { .. } => 2,
        };
        CliError { message: e.to_string(), code }
    }
}

impl From<CheckError> for CliError {
    fn from(e: CheckError) -> Self {
        match e {
            CheckError::Product(p) => p.into(),
            CheckError::Precondition(_) => CliError::usage(e.to_string()),
        }
    }
}

type CliResult = Result<Outcome, CliError>;

fn parse_tuple(text: &str) -> Result<Table, CliError> {
    let values = text
        .split(',')
        .map(|s| stuffle_core::scalar::parse_rational(s.trim()).ok_or_else(|| SpecError::Rational(s.trim().into())))
        .collect::<Result<Vec<Rational>, _>>()?;
    let c = match values.len() {
        6 => 2,
        12 => 3,
        n => return Err(CliError::usage(format!("a tuple has 6 or 12 entries, got {n}"))),
    };
    Ok(table_from_tuple(c, &values, F3Map::new())?)
}

fn read_spec(path: &Path) -> Result<Spec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_spec(&text)?)
}

fn load(spec: &SpecArgs) -> Result<Option<Spec>, CliError> {
    if let Some(path) = &spec.spec {
        return read_spec(path).map(Some);
    }
    if let Some(name) = &spec.builtin {
        return Ok(Some(Spec::Rule(builtin_spec(name, spec.max_index.unwrap_or(DEFAULT_MAX_INDEX))?)));
    }
    if let Some(t) = &spec.tuple {
        return parse_tuple(t).map(|t| Some(Spec::Table(t)));
    }
    Ok(None)
}

fn require(spec: &SpecArgs) -> Result<Spec, CliError> {
    load(spec)?.ok_or_else(|| CliError::usage("a product is required: --spec FILE, --builtin NAME or --tuple T"))
}

fn render(report: &CheckReport, format: Format) -> Outcome {
    let output = match format {
        Format::Text => report.render_text() + "\n",
        Format::Json => report.to_json() + "\n",
    };
    Outcome { output, passed: report.passed() }
}

fn grid_values(grid: Grid) -> Vec<Rational> {
    match grid {
        Grid::Bool => grid_01(),
        Grid::Ext => grid_ext(),
    }
}

fn json_line(v: Value) -> String {
    serde_json::to_string_pretty(&v).expect("json serializes") + "\n"
}

pub fn product(spec: &SpecArgs, end: bool, format: Format, u: &str, v: &str) -> CliResult {
    let spec = require(spec)?;
    let names = spec.names();
    let parse = |s: &str| names.parse_word(s).map_err(|e| CliError::usage(format!("cannot parse word `{s}`: {e}")));
    let (wu, wv) = (parse(u)?, parse(v)?);
    let mut e = Engine::new(spec.as_rule());
    let result = if end { e.end_product(&wu, &wv)? } else { e.product(&wu, &wv)? };
    let text = result.render(names);
    let output = match format {
        Format::Text => text + "\n",
        Format::Json => {
            let terms: Vec<Value> = result
                .render_terms(names)
                .into_iter()
                .map(|(w, k)| json!({ "word": w, "coeff": k }))
                .collect();
            json_line(json!({
                "u": names.format_word(&wu),
                "v": names.format_word(&wv),
                "end": end,
                "product": text,
                "terms": terms,
            }))
        }
    };
    Ok(Outcome { output, passed: true })
}

fn table_of(spec: &Spec, what: &str) -> Result<Table, CliError> {
    match spec {
        Spec::Table(t) => Ok(t.clone()),
        Spec::Rule(r) if r.max_index() <= 3 => Ok(r.induced_table()),
        Spec::Rule(_) => Err(CliError::usage(format!("{what} needs a finite table; use --spec or --tuple"))),
    }
}

pub fn check(which: CheckKind, spec: &SpecArgs, n: usize, alphabet: usize, grid: Grid, format: Format) -> CliResult {
    let loaded = load(spec)?;
    if which == CheckKind::Quadri {
        let classical;
        let rule: &dyn stuffle_core::ProductRule<Rational> = match &loaded {
            Some(s) => s.as_rule(),
            None => {
                classical = StuffleTable::<Rational>::classical(alphabet);
                &classical
            }
        };
        if n < 6 {
            return Err(CliError::usage("quadri needs --max-len of at least 6"));
        }
        let lengths: Vec<usize> = (2..=n - 4).collect();
        let words = quadri_words(rule.check_alphabet(n), &lengths);
        return Ok(render(&check_quadri_on(rule, &words, n)?, format));
    }
    let spec = loaded.ok_or_else(|| CliError::usage("a product is required: --spec FILE, --builtin NAME or --tuple T"))?;
    let rule = spec.as_rule();
    let report = match which {
        CheckKind::Comm => check_commutative(rule, n)?,
        CheckKind::Assoc => check_associative(rule, n)?,
        CheckKind::Char => check_characterization(&table_of(&spec, "char")?)?,
        CheckKind::Dendriform => check_dendriform(rule, n)?,
        CheckKind::Hopf => check_hopf_compat(rule, n)?,
        CheckKind::StuffleRelations => check_stuffle_relations(&table_of(&spec, "stuffle-relations")?),
        CheckKind::End => {
            let t = table_of(&spec, "end")?;
            return Ok(match check_end_equality(&t, &grid_values(grid), n)? {
                Some(found) => {
                    let output = match format {
                        Format::Text => format!("end (N={n}): FOUND {}\n", table_to_json(&found)),
                        Format::Json => json_line(json!({
                            "check": "end",
                            "bound": n,
                            "found": serde_json::from_str::<Value>(&table_to_json(&found)).expect("table json"),
                        })),
                    };
                    Outcome { output, passed: true }
                }
                None => {
                    let output = match format {
                        Format::Text => format!("end (N={n}): NONE\n"),
                        Format::Json => json_line(json!({ "check": "end", "bound": n, "found": Value::Null })),
                    };
                    Outcome { output, passed: false }
                }
            });
        }
        CheckKind::Quadri => unreachable!(),
    };
    Ok(render(&report, format))
}

fn alphabet_ok(c: usize) -> Result<(), CliError> {
    if (2..=3).contains(&c) {
        Ok(())
    } else {
        Err(CliError::usage("--alphabet must be 2 or 3"))
    }
}

fn family_text(t: &Table) -> String {
    let all = match_all(t);
    if all.is_empty() {
        "-".into()
    } else {
        all.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(" ")
    }
}

pub fn enumerate_shuffles(c: usize, grid: Grid, all: bool, format: Format) -> CliResult {
    alphabet_ok(c)?;
    let tables = enumerate_weak_shuffles::<Rational>(c, &grid_values(grid));
    let classes = orbits(&tables);
    let rows: Vec<(Table, usize)> = if all {
        let mut rows = Vec::new();
        for (i, o) in classes.iter().enumerate() {
            for m in &o.members {
                rows.push((m.clone(), i + 1));
            }
        }
        rows.sort_by(|(a, _), (b, _)| {
            let pos = |t: &Table| tables.iter().position(|x| x == t);
            pos(a).cmp(&pos(b))
        });
        rows
    } else {
        classes.iter().enumerate().map(|(i, o)| (o.representative.clone(), i + 1)).collect()
    };
    let output = match format {
        Format::Text => {
            let mut out = String::new();
            for (t, class) in &rows {
                writeln!(out, "{}\tclass {class}\t{}", t.tuple_text(), family_text(t)).unwrap();
            }
            writeln!(out, "{} tables, {} classes under relabelling", tables.len(), classes.len()).unwrap();
            out
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|(t, class)| {
                    json!({
                        "tuple": t.tuple_text(),
                        "class": class,
                        "families": match_all(t).iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            json_line(json!({ "tables": tables.len(), "classes": classes.len(), "rows": rows }))
        }
    };
    Ok(Outcome { output, passed: true })
}

pub fn enumerate_f3(c: usize, grid: Grid, format: Format) -> CliResult {
    alphabet_ok(c)?;
    let maps = enumerate_f3_tables::<Rational>(c, &grid_values(grid));
    let names = stuffle_core::LetterNames::default();
    let describe = |m: &F3Map<Rational>| -> Vec<String> {
        m.iter()
            .filter(|((a, b), _)| a <= b)
            .map(|((a, b), (k, g))| {
                let [a, b, g] = [*a, *b, *g].map(|l| names.format_word(&stuffle_core::Word::letter(l)));
                if k == &Rational::from_integer(1.into()) {
                    format!("{a}{b}→{g}")
                } else {
                    format!("{a}{b}→{k}*{g}")
                }
            })
            .collect()
    };
    let output = match format {
        Format::Text => {
            let mut out = String::new();
            for m in &maps {
                let parts = describe(m);
                writeln!(out, "{}", if parts.is_empty() { "0".into() } else { parts.join(" ") }).unwrap();
            }
            writeln!(out, "{} maps", maps.len()).unwrap();
            out
        }
        Format::Json => json_line(json!({ "maps": maps.iter().map(describe).collect::<Vec<_>>() })),
    };
    Ok(Outcome { output, passed: true })
}

pub fn kernel(spec: &SpecArgs, degree: usize, format: Format) -> CliResult {
    let spec = require(spec)?;
    let result = square_zero_dim(spec.as_rule(), degree)?;
    let names = spec.names();
    let output = match format {
        Format::Text => format!("K({degree},2): {}\n", result.describe(names)),
        Format::Json => json_line(json!({
            "degree": degree,
            "dimension": result.dimension,
            "basis": result.basis.iter().map(|w| names.format_word(w)).collect::<Vec<_>>(),
            "remaining": result.remaining,
        })),
    };
    Ok(Outcome { output, passed: result.dimension.is_some() })
}

pub fn statement(degree: usize, budget: Option<u64>, format: Format) -> CliResult {
    if degree == 0 {
        return Err(CliError::usage("--degree starts at 1"));
    }
    let start = Instant::now();
    let report = leading_statement(degree);
    let cert = square_zero_certificate(degree);
    let took = start.elapsed();
    let over = budget.is_some_and(|b| took > Duration::from_secs(b));
    let stmt = if report.passed() { "PASS" } else { "FAIL" };
    let kernel = match (&cert, over) {
        (_, true) => "INCONCLUSIVE",
        (Certificate::ProvenZero, _) => "PROVEN",
        (Certificate::Inconclusive(_), _) => "INCONCLUSIVE",
    };
    let output = match format {
        Format::Text => {
            let mut out = format!("statement({degree}): {stmt}, K({degree},2)={{0}}: {kernel}\n");
            if let Some(f) = &report.failure {
                writeln!(out, "  witness: {}\n  lhs: {}\n  rhs: {}", f.witness_text.join(", "), f.lhs, f.rhs).unwrap();
            }
            if let Certificate::Inconclusive(why) = &cert {
                writeln!(out, "  reason: {why}").unwrap();
            }
            if over {
                writeln!(out, "  reason: over the time budget").unwrap();
            }
            out
        }
        Format::Json => json_line(json!({
            "degree": degree,
            "statement": stmt,
            "kernel": kernel,
            "report": serde_json::from_str::<Value>(&report.to_json()).expect("report json"),
        })),
    };
    Ok(Outcome { output, passed: report.passed() && kernel == "PROVEN" })
}

fn finite(path: &Path) -> Result<Table, CliError> {
    match read_spec(path)? {
        Spec::Table(t) => Ok(t),
        Spec::Rule(r) if r.max_index() <= 3 => Ok(r.induced_table()),
        Spec::Rule(_) => Err(CliError::usage(format!("{} must hold a finite table", path.display()))),
    }
}

pub fn iso_verify(map: MapKind, from: &Path, to: &Path, n: usize, format: Format) -> CliResult {
    let (source, target) = (finite(from)?, finite(to)?);
    let (diag, note): (DiagonalMap<Rational>, Option<String>) = match map {
        MapKind::Psi => {
            // the map is defined from whichever side carries the letter
            let base = if psi_letter(&source).is_some() { &source } else { &target };
            let (psi, _) = iso_psi(base, None)?;
            let note = (base == &source).then(|| {
                "ψ is verified from the normalized table to the unnormalized one; this direction is expected to fail"
                    .to_string()
            });
            (psi, note)
        }
        MapKind::Phi1 | MapKind::Phi2 => {
            let m = valzeroun_case(&source)
                .ok_or_else(|| CliError::usage("the source table matches none of the listed cases"))?;
            let variant = if map == MapKind::Phi1 { 1 } else { 2 };
            let (phi, _) = iso_phi(&source, (m.a, m.b), m.k.clone(), variant)?;
            let note = (variant != m.variant).then(|| format!("case {} calls for phi{}", m.case, m.variant));
            (phi, note)
        }
    };
    let mut report = verify_morphism(&diag, &source, &target, n)?;
    if let Some(note) = note {
        report = report.with_note(note);
    }
    Ok(render(&report, format))
}
