use crate::inputs::{invalid, load_cdga, load_gerbe, load_site, parse_err, parse_lambda, resolve, CliError, Kind};
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::sync::Arc;
use twistcoh::cdga::{betti, validate_cdga, Cdga, CdgaJson};
use twistcoh::gerbe::fixtures::GerbeFixture;
use twistcoh::gerbe::{
    bs1_bar_complex, build_total_complex, curvature, h0_column_check, theorem_main_check, validate_connection, Cochains,
    GerbeJson,
};
use twistcoh::linalg::{format_rational, SparseVec};
use twistcoh::oracle::dense_twisted_betti;
use twistcoh::oracle::random::random_presheaf;
use twistcoh::site::fixtures::{all_morphisms, locally_constant};
use twistcoh::site::json::SiteJson;
use twistcoh::site::{adjunction_check, is_flabby, is_sheaf, sheafify, FiniteSite, Presheaf};
use twistcoh::spectral::{d3_equals_lambda_cup, e_infinity_dims, pages, stabilization_page, FilteredComplex};
use twistcoh::twisted::{psi_reports, twisted_betti, z_graded_complex, PsiRange, TwistClass};

/// Output of one command. `ok == false` means a check or validation failed.
pub struct Report {
    pub text: String,
    pub result: Value,
    pub ok: bool,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn coeffs(v: &SparseVec) -> Vec<(usize, String)> {
    v.iter().map(|(i, q)| (i, format_rational(q))).collect()
}

fn list<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn twist(model: &str, lambda: &str) -> Result<(Arc<Cdga>, TwistClass), CliError> {
    let c = Arc::new(load_cdga(model)?);
    let report = validate_cdga(&c);
    if !report.is_valid() {
        return Err(invalid(format!("{} is not a CDGA: {}", c.name(), report.violations[0])));
    }
    let lam = parse_lambda(lambda, c.dim())?;
    let t = TwistClass::new(Arc::clone(&c), lam).map_err(invalid)?;
    Ok((c, t))
}

pub fn validate(input: &str) -> Result<Report, CliError> {
    let (kind, text) = resolve(input, &Kind::ALL)?;
    let (name, violations): (String, Vec<String>) = match kind {
        Kind::Cdga => {
            let j: CdgaJson = serde_json::from_str(&text).map_err(parse_err)?;
            match Cdga::try_from(&j) {
                Ok(c) => (j.name, validate_cdga(&c).violations.iter().map(|v| v.to_string()).collect()),
                Err(e) => (j.name, vec![e.to_string()]),
            }
        }
        Kind::Site => {
            let j: SiteJson = serde_json::from_str(&text).map_err(parse_err)?;
            match FiniteSite::try_from(&j) {
                Ok(s) => (j.name, s.violations()),
                Err(e) => (j.name, vec![e.to_string()]),
            }
        }
        Kind::Gerbe => {
            let j: GerbeJson = serde_json::from_str(&text).map_err(parse_err)?;
            match GerbeFixture::try_from(&j) {
                Ok(g) => {
                    let rep = validate_connection(&g.cover, &g.connection);
                    (j.cover.name, rep.violations.iter().map(|v| v.to_string()).collect())
                }
                Err(e) => (j.cover.name, vec![e.to_string()]),
            }
        }
    };
    let ok = violations.is_empty();
    let mut text = format!("{} {name}: {}\n", kind.dir(), if ok { "valid" } else { "INVALID" });
    for v in &violations {
        let _ = writeln!(text, "  {v}");
    }
    Ok(Report { text, result: json!({ "kind": kind.dir(), "name": name, "valid": ok, "violations": violations }), ok })
}

pub fn twisted(model: &str, lambda: &str, max_degree: Option<usize>) -> Result<Report, CliError> {
    let (c, t) = twist(model, lambda)?;
    let max_degree = max_degree.unwrap_or(c.top_degree() + 4);
    let (even, odd) = twisted_betti(&t).map_err(invalid)?;
    let dense = t.lambda().to_dense(c.dim());
    let (oe, oo) = dense_twisted_betti(&c, &dense);
    let z = z_graded_complex(&t, max_degree).map_err(invalid)?.betti().map_err(invalid)?;
    let untwisted = betti(&c).map_err(invalid)?;
    let ok = (even, odd) == (oe, oo);
    let text = format!(
        "model {}  lambda {}\nbetti          {}\ntwisted (even, odd) = ({even}, {odd})  oracle ({oe}, {oo})\nz-graded up to {max_degree}: {}\n",
        c.name(),
        t.lambda(),
        list(&untwisted),
        list(&z)
    );
    let result = json!({
        "model": c.name(),
        "lambda": coeffs(t.lambda()),
        "betti": untwisted,
        "twisted": { "even": even, "odd": odd },
        "oracle": { "even": oe, "odd": oo },
        "z_graded": { "max_degree": max_degree, "betti": z },
    });
    Ok(Report { text, result, ok })
}

#[derive(Serialize)]
struct PsiRow {
    p: usize,
    chain_map: bool,
    invertible: bool,
    source_dim: usize,
    target_dim: usize,
}

pub fn psi(model: &str, lambda: &str, p_max: Option<usize>, truncated: bool) -> Result<Report, CliError> {
    let (c, t) = twist(model, lambda)?;
    let p_max = p_max.unwrap_or(c.top_degree() + 4);
    let range = if truncated { PsiRange::Truncated } else { PsiRange::Full };
    let rows: Vec<PsiRow> = psi_reports(&t, p_max, range)
        .map_err(invalid)?
        .into_iter()
        .map(|r| PsiRow { p: r.p, chain_map: r.chain_map, invertible: r.invertible, source_dim: r.source_dim, target_dim: r.target_dim })
        .collect();
    let mut text = format!("model {}  top degree {}  range {}\n p  chain  invertible  dims\n", c.name(), c.top_degree(), if truncated { "truncated" } else { "full" });
    for r in &rows {
        let _ = writeln!(text, "{:>2}  {:<5}  {:<10}  {}x{}", r.p, r.chain_map, r.invertible, r.target_dim, r.source_dim);
    }
    let ok = rows.iter().all(|r| r.chain_map);
    let result = json!({
        "model": c.name(),
        "top_degree": c.top_degree(),
        "range": if truncated { "truncated" } else { "full" },
        "lambda": coeffs(t.lambda()),
        "p": rows,
    });
    Ok(Report { text, result, ok })
}

pub fn spectral(model: &str, lambda: &str, r_max: Option<usize>) -> Result<Report, CliError> {
    let (c, t) = twist(model, lambda)?;
    let r_max = r_max.unwrap_or(c.top_degree() + 2);
    let f = FilteredComplex::new(&t);
    let ps = pages(&f, r_max).map_err(invalid)?;
    let inf = e_infinity_dims(&f).map_err(invalid)?;
    let stable = stabilization_page(&f, r_max).map_err(invalid)?;
    let (even, odd) = twisted_betti(&t).map_err(invalid)?;
    let inf_parity = (inf.iter().step_by(2).sum::<usize>(), inf.iter().skip(1).step_by(2).sum::<usize>());
    let d3 = if c.differential().is_zero() { d3_equals_lambda_cup(&f, &t).ok().map(|r| r.matches) } else { None };
    let mut text = format!("model {}  lambda {}\n", c.name(), t.lambda());
    for p in &ps {
        let _ = writeln!(text, "E_{}  {}", p.r, list(&p.dims()));
    }
    let _ = writeln!(text, "E_inf {}  stabilizes at {}", list(&inf), stable.map_or("-".into(), |r| r.to_string()));
    let _ = writeln!(text, "E_inf (even, odd) = ({}, {})  twisted ({even}, {odd})", inf_parity.0, inf_parity.1);
    let _ = writeln!(text, "d3 = [lambda] cup: {}", d3.map_or("n/a".into(), |b| b.to_string()));
    let ok = inf_parity == (even, odd) && d3 != Some(false);
    let result = json!({
        "model": c.name(),
        "lambda": coeffs(t.lambda()),
        "pages": ps.iter().map(|p| json!({ "r": p.r, "dims": p.dims() })).collect::<Vec<_>>(),
        "e_infinity": inf,
        "stabilization_page": stable,
        "twisted": { "even": even, "odd": odd },
        "d3_equals_lambda_cup": d3,
    });
    Ok(Report { text, result, ok })
}

pub fn gerbe(input: &str, max_degree: Option<usize>, full: bool) -> Result<Report, CliError> {
    let g = load_gerbe(input)?;
    let rep = validate_connection(&g.cover, &g.connection);
    if !rep.is_valid() {
        return Err(invalid(format!("{}: {}", g.cover.name, rep.violations[0])));
    }
    let x = &g.cover.global;
    let deg = max_degree.unwrap_or(if g.cover.charts == 1 { x.top_degree() + 4 } else { 4 });
    let kind = if full { Cochains::Full } else { Cochains::Normalized };
    let lambda = curvature(&g.cover, &g.connection).map_err(invalid)?;
    let report = theorem_main_check(&g.cover, &g.connection, kind, deg).map_err(invalid)?;
    let t = build_total_complex(&g.cover, &g.connection, kind, None, deg.min(x.top_degree())).map_err(invalid)?;
    let h0 = h0_column_check(&t).map_err(invalid)?;
    let mut text = format!("cover {}  charts {}  cochains {}\n", g.cover.name, g.cover.charts, if full { "full" } else { "normalized" });
    let _ = writeln!(text, "curvature {lambda}");
    let _ = writeln!(text, "total complex betti   {}", list(&report.total_betti));
    let _ = writeln!(text, "z-graded betti        {}", list(&report.twisted_betti));
    let _ = writeln!(
        text,
        "D^2 = 0: {}  phi chain map: {}  unital: {}  multiplicative: {}",
        report.d_squared_zero, report.phi_chain_map, report.phi_unital, report.phi_multiplicative
    );
    let _ = writeln!(text, "phi iso by degree     {}", list(&report.iso_by_degree));
    let _ = writeln!(text, "H0 column = global forms: {}", h0.holds());
    let _ = writeln!(text, "verdict: {}", if report.verdict() { "PASS" } else { "FAIL" });
    let ok = report.verdict() && h0.holds();
    let result = json!({
        "cochains": if full { "full" } else { "normalized" },
        "theorem": to_value(&report),
        "verdict": report.verdict(),
        "h0": to_value(&h0),
    });
    Ok(Report { text, result, ok })
}

#[derive(Serialize)]
struct PresheafRow {
    label: String,
    dims: Vec<usize>,
    is_sheaf: bool,
    sheafified_dims: Vec<usize>,
    sheafified_is_sheaf: bool,
    idempotent: bool,
    flabby: Option<(usize, usize, usize)>,
}

fn presheaf_row(site: &FiniteSite, label: String, f: &Presheaf) -> Result<PresheafRow, CliError> {
    let sh = sheafify(site, f).map_err(invalid)?;
    let again = sheafify(site, &sh.presheaf).map_err(invalid)?;
    let flabby = is_flabby(site, &sh.presheaf, 2).map_err(invalid)?.map(|w| (w.object, w.covering, w.degree));
    Ok(PresheafRow {
        label,
        dims: f.dims.clone(),
        is_sheaf: is_sheaf(site, f).map_err(invalid)?,
        sheafified_dims: sh.presheaf.dims.clone(),
        sheafified_is_sheaf: is_sheaf(site, &sh.presheaf).map_err(invalid)?,
        idempotent: again.unit.is_iso(),
        flabby,
    })
}

pub fn site(input: &str, samples: usize, seed: u64) -> Result<Report, CliError> {
    let s = load_site(input)?;
    let mut rows = vec![presheaf_row(&s, "constant".into(), &locally_constant(&s, 1))?];
    for k in 0..samples as u64 {
        rows.push(presheaf_row(&s, format!("random seed {}", seed + k), &random_presheaf(seed + k, &s))?);
    }
    let mut adjunctions = Vec::new();
    for m in all_morphisms().iter().filter(|m| m.source.name == s.name || m.target.name == s.name) {
        let mut holds = true;
        for k in 0..samples.max(1) as u64 {
            let a = random_presheaf(seed + 7 * k, &m.target);
            let b = random_presheaf(seed + 7 * k + 1000, &m.source);
            holds &= adjunction_check(m, &a, &b).map_err(invalid)?.holds();
        }
        adjunctions.push(json!({ "morphism": m.name, "holds": holds }));
    }
    let mut text = format!("site {}  objects {}\n", s.name, s.len());
    for r in &rows {
        let _ = writeln!(
            text,
            "{:<16} dims {:<14} sheaf {:<5} -> {:<14} sheaf {:<5} idempotent {:<5} flabby {}",
            r.label,
            list(&r.dims),
            r.is_sheaf,
            list(&r.sheafified_dims),
            r.sheafified_is_sheaf,
            r.idempotent,
            r.flabby.map_or("yes".into(), |w| format!("no {w:?}"))
        );
    }
    for a in &adjunctions {
        let _ = writeln!(text, "adjunction {} holds: {}", a["morphism"].as_str().unwrap_or(""), a["holds"]);
    }
    let ok = rows.iter().all(|r| r.sheafified_is_sheaf && r.idempotent)
        && adjunctions.iter().all(|a| a["holds"] == Value::Bool(true));
    let result = json!({ "site": s.name, "seed": seed, "presheaves": rows, "adjunctions": adjunctions });
    Ok(Report { text, result, ok })
}

pub fn bs1(max_degree: usize) -> Result<Report, CliError> {
    let dims = bs1_bar_complex(max_degree).map_err(invalid)?;
    let ok = dims.iter().enumerate().all(|(n, &d)| d == usize::from(n % 2 == 0));
    let text = format!("BS1 bar complex, degrees 0..={max_degree}: {}\n", list(&dims));
    Ok(Report { text, result: json!({ "max_degree": max_degree, "dims": dims }), ok })
}
