//! Locating and loading models, sites and gerbes by file path or fixture name.

use serde::de::DeserializeOwned;
use serde::Serialize;
use std::path::{Path, PathBuf};
use twistcoh::cdga::{Cdga, CdgaJson};
use twistcoh::gerbe::fixtures::GerbeFixture;
use twistcoh::gerbe::GerbeJson;
use twistcoh::linalg::{parse_rational, SparseVec};
use twistcoh::site::json::SiteJson;
use twistcoh::site::FiniteSite;

pub const FIXTURE_ENV: &str = "TWISTCOH_FIXTURES";

/// Parse failures map to exit code 2, everything else reported as a failed check to 1.
#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Invalid(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Invalid(m) => write!(f, "invalid input: {m}"),
        }
    }
}

pub fn parse_err(e: impl std::fmt::Display) -> CliError {
    CliError::Parse(e.to_string())
}

pub fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Cdga,
    Site,
    Gerbe,
}

impl Kind {
    pub const ALL: [Kind; 3] = [Kind::Cdga, Kind::Site, Kind::Gerbe];

    pub fn dir(self) -> &'static str {
        match self {
            Kind::Cdga => "cdga",
            Kind::Site => "site",
            Kind::Gerbe => "gerbe",
        }
    }

    fn parse(s: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.dir() == s)
    }
}

pub fn fixture_dir() -> PathBuf {
    match std::env::var_os(FIXTURE_ENV) {
        Some(d) => PathBuf::from(d),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures"),
    }
}

/// Raw JSON for `input`: an existing file, `kind/name`, or a bare name searched
/// in each of `kinds`. The fixture directory wins over the built-in copies.
pub fn resolve(input: &str, kinds: &[Kind]) -> Result<(Kind, String), CliError> {
    let path = Path::new(input);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(parse_err)?;
        let kind = detect(&text)?;
        if !kinds.contains(&kind) {
            return Err(CliError::Parse(format!("{input} holds a {} description", kind.dir())));
        }
        return Ok((kind, text));
    }
    let (kinds, name): (Vec<Kind>, &str) = match input.split_once('/') {
        Some((k, n)) => match Kind::parse(k) {
            Some(k) if kinds.contains(&k) => (vec![k], n),
            _ => return Err(CliError::Parse(format!("no such file: {input}"))),
        },
        None => (kinds.to_vec(), input),
    };
    let dir = fixture_dir();
    for &k in &kinds {
        let file = dir.join(k.dir()).join(format!("{name}.json"));
        if file.is_file() {
            return Ok((k, std::fs::read_to_string(&file).map_err(parse_err)?));
        }
    }
    for &k in &kinds {
        if let Some(text) = builtin(k, name) {
            return Ok((k, text));
        }
    }
    Err(CliError::Parse(format!("unknown fixture or file: {input}")))
}

fn detect(text: &str) -> Result<Kind, CliError> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(parse_err)?;
    let has = |k: &str| v.get(k).is_some();
    if has("cover") {
        Ok(Kind::Gerbe)
    } else if has("objects") {
        Ok(Kind::Site)
    } else if has("degrees") {
        Ok(Kind::Cdga)
    } else {
        Err(CliError::Parse("unrecognized JSON description".into()))
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn builtin(kind: Kind, name: &str) -> Option<String> {
    match kind {
        Kind::Cdga => twistcoh::cdga::fixtures::by_name(name).map(|c| pretty(&CdgaJson::from(&c))),
        Kind::Site => twistcoh::site::fixtures::site_by_name(name).map(|s| pretty(&SiteJson::from(&s))),
        Kind::Gerbe => twistcoh::gerbe::fixtures::by_name(name).map(|g| pretty(&GerbeJson::from(&g))),
    }
}

fn decode<T: DeserializeOwned>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(parse_err)
}

pub fn load_cdga(input: &str) -> Result<Cdga, CliError> {
    let (_, text) = resolve(input, &[Kind::Cdga])?;
    Cdga::try_from(&decode::<CdgaJson>(&text)?).map_err(parse_err)
}

pub fn load_site(input: &str) -> Result<FiniteSite, CliError> {
    let (_, text) = resolve(input, &[Kind::Site])?;
    FiniteSite::try_from(&decode::<SiteJson>(&text)?).map_err(parse_err)
}

pub fn load_gerbe(input: &str) -> Result<GerbeFixture, CliError> {
    let (_, text) = resolve(input, &[Kind::Gerbe])?;
    GerbeFixture::try_from(&decode::<GerbeJson>(&text)?).map_err(parse_err)
}

/// `index:p/q` pairs separated by commas, e.g. `7:1` or `1:-2/3,4:5`.
pub fn parse_lambda(s: &str, dim: usize) -> Result<SparseVec, CliError> {
    let mut pairs = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (i, v) = part.split_once(':').ok_or_else(|| CliError::Parse(format!("expected index:value, got {part}")))?;
        let i: usize = i.trim().parse().map_err(parse_err)?;
        if i >= dim {
            return Err(CliError::Parse(format!("basis index {i} out of range (dimension {dim})")));
        }
        pairs.push((i, parse_rational(v.trim()).map_err(parse_err)?));
    }
    Ok(SparseVec::from_pairs(pairs))
}

/// Writes every bundled fixture as `dir/<kind>/<name>.json`; returns the paths written.
pub fn export_fixtures(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files: Vec<(Kind, String, String)> = Vec::new();
    for c in twistcoh::cdga::fixtures::all() {
        files.push((Kind::Cdga, c.name().to_string(), pretty(&CdgaJson::from(&c))));
    }
    for s in twistcoh::site::fixtures::all_sites() {
        files.push((Kind::Site, s.name.clone(), pretty(&SiteJson::from(&s))));
    }
    for g in twistcoh::gerbe::fixtures::all() {
        files.push((Kind::Gerbe, g.cover.name.clone(), pretty(&GerbeJson::from(&g))));
    }
    let mut out = Vec::new();
    for (kind, name, text) in files {
        let sub = dir.join(kind.dir());
        std::fs::create_dir_all(&sub)?;
        let file = sub.join(format!("{name}.json"));
        std::fs::write(&file, text)?;
        out.push(file);
    }
    Ok(out)
}
