//! Command-line interface: single-instance computation, verification runs,
//! and batch tabulation with structured output.
//!
//! Exit codes: 0 ok, 2 invalid input, 3 verification failure, 4 internal
//! cap exhausted.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::fieldcase::{ACase, CaseProfile};
use crate::grid::{evaluate, GridRecord, GridSpec};
use crate::hilbert::{hilbert_genus, HilbertGenusReport, SquarePayload};
use crate::normeq::NormCache;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_VERIFICATION_FAILURE: i32 = 3;
pub const EXIT_CAP_EXHAUSTED: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "quartic-genus",
    about = "Genus fields and Hilbert genus fields of imaginary cyclic quartic fields Q(sqrt(-a*eps_p*sqrt(p)))",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComputeFormat {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BatchFormat {
    Jsonl,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the Hilbert genus field generators for one instance.
    Compute {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        a: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: ComputeFormat,
        /// Dispatch on this a-case tag instead of the computed one
        /// (odd_1mod4 | odd_3mod4 | even_core1mod4 | even_core3mod4).
        #[arg(long)]
        case_override: Option<String>,
        /// Force the norm-equation exponent to the full lambda*h.
        #[arg(long)]
        strict_lemma43: bool,
        /// Render generators in TeX instead of ASCII.
        #[arg(long)]
        tex: bool,
    },
    /// Print the genus field generators only.
    Genus {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        a: u64,
    },
    /// Run the full verification suite for one instance.
    Verify {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        strict_lemma43: bool,
    },
    /// Sweep a (p, a) rectangle and emit one record per pair.
    Tabulate {
        #[arg(long)]
        p_min: u64,
        #[arg(long)]
        p_max: u64,
        #[arg(long)]
        a_min: u64,
        #[arg(long)]
        a_max: u64,
        #[arg(long, value_enum, default_value = "jsonl")]
        format: BatchFormat,
        /// Output path; stdout when omitted. Overwritten if present.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        strict_lemma43: bool,
    },
}

// ---------------------------------------------------------------------------
// stable JSON schema

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct JsonElem {
    pub s: String,
    pub t: String,
    pub den: u8,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(untagged)]
pub enum JsonPayload {
    /// Decimal string, like the element coordinates.
    Rational(String),
    Quadratic(JsonElem),
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct JsonGen {
    pub kind: String,
    pub payload: JsonPayload,
    pub display: String,
    pub source_q: Option<u64>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct JsonChecks {
    pub unramified: Vec<String>,
    pub independent: bool,
    pub genus_in_hilbert: bool,
    pub rank_formula: bool,
    pub e2_certificate: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct JsonReport {
    pub p: u64,
    pub a: u64,
    pub case: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case_override: Option<String>,
    pub n: usize,
    pub m: usize,
    pub lambda: Option<u32>,
    pub h: u64,
    pub eps: JsonElem,
    pub rel_disc_coeff: u128,
    pub t_ramified: u32,
    pub e: u32,
    pub rank: u32,
    pub genus_gens: Vec<String>,
    pub hilbert_gens: Vec<JsonGen>,
    pub checks: JsonChecks,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

fn json_elem(e: &crate::quadfield::QuadElem) -> JsonElem {
    JsonElem {
        s: e.s().to_string(),
        t: e.t().to_string(),
        den: e.den(),
    }
}

pub fn to_json_report(rep: &HilbertGenusReport, warnings: Vec<String>) -> JsonReport {
    let profile = &rep.profile;
    JsonReport {
        p: profile.p,
        a: profile.a,
        case: profile.a_case.as_str().to_string(),
        case_override: profile.case_override.map(|c| c.as_str().to_string()),
        n: profile.n,
        m: profile.m,
        lambda: profile.lambda,
        h: profile.h,
        eps: json_elem(&profile.eps),
        rel_disc_coeff: crate::fieldcase::relative_discriminant_coeff(profile),
        t_ramified: rep.t,
        e: rep.e,
        rank: rep.rank,
        genus_gens: rep.genus_generators.iter().map(|g| g.display()).collect(),
        hilbert_gens: rep
            .hilbert_generators
            .iter()
            .map(|g| JsonGen {
                kind: g.kind.as_str().to_string(),
                payload: match &g.payload {
                    SquarePayload::Rational(r) => JsonPayload::Rational(r.to_string()),
                    SquarePayload::Quadratic(u) => JsonPayload::Quadratic(json_elem(u)),
                },
                display: g.display(),
                source_q: g.source_q,
            })
            .collect(),
        checks: JsonChecks {
            unramified: rep.verification.unramified.iter().map(|v| v.as_str()).collect(),
            independent: rep.verification.independent,
            genus_in_hilbert: rep.verification.genus_in_hilbert
                && rep.verification.genus_span_contained,
            rank_formula: rep.verification.rank_formula_holds,
            e2_certificate: rep.verification.real_place.confirms_e_two(),
        },
        warnings,
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct JsonSkip {
    pub p: u64,
    pub a: Option<u64>,
    pub skip: String,
}

// ---------------------------------------------------------------------------
// rendering

fn render_text(rep: &HilbertGenusReport, warnings: &[String], tex: bool) -> String {
    let profile = &rep.profile;
    let mut out = String::new();
    let display = |g: &crate::hilbert::SquareClass| if tex { g.tex() } else { g.display() };
    let factors: Vec<String> = std::iter::once(if profile.factorization.has_factor_two {
        Some("2".to_string())
    } else {
        None
    })
    .flatten()
    .chain(profile.factorization.odd_primes.iter().map(|q| q.to_string()))
    .collect();
    out.push_str(&format!("p = {}\n", profile.p));
    if factors.len() > 1 {
        out.push_str(&format!("a = {} = {}\n", profile.a, factors.join(" * ")));
    } else {
        out.push_str(&format!("a = {}\n", profile.a));
    }
    out.push_str(&format!(
        "case: {} ({})\n",
        profile.effective_a_case().as_str(),
        profile.p_case.as_str()
    ));
    match profile.lambda {
        Some(l) => out.push_str(&format!(
            "n = {}, m = {}, lambda = {}, h = {}\n",
            profile.n, profile.m, l, profile.h
        )),
        None => out.push_str(&format!("n = {}, m = {}, h = {}\n", profile.n, profile.m, profile.h)),
    }
    out.push_str(&format!("eps = {}\n", if tex { profile.eps.to_tex() } else { profile.eps.to_string() }));
    out.push_str(&format!(
        "rel disc over Q(sqrt({})) = {}*sqrt({})\n",
        profile.p,
        crate::fieldcase::relative_discriminant_coeff(profile),
        profile.p
    ));
    out.push_str(&format!("t = {}, e = {}, rank = {}\n", rep.t, rep.e, rep.rank));
    let genus: Vec<String> = rep.genus_generators.iter().map(&display).collect();
    out.push_str(&format!(
        "genus field generators ({}): {}\n",
        genus.len(),
        if genus.is_empty() { "(none; K^(*) = K)".to_string() } else { genus.join(", ") }
    ));
    out.push_str(&format!("hilbert genus field generators ({}):\n", rep.rank));
    for (g, verdict) in rep.hilbert_generators.iter().zip(&rep.verification.unramified) {
        let source = match g.source_q {
            Some(q) => format!("{}(q={})", g.kind.as_str(), q),
            None => g.kind.as_str().to_string(),
        };
        out.push_str(&format!(
            "  {:<24} {:<16} unramified: {}\n",
            display(g),
            source,
            verdict.as_str()
        ));
    }
    out.push_str(&format!(
        "checks: independent = {}, genus_in_hilbert = {}, rank_formula = {}, e2_certificate = {}\n",
        rep.verification.independent,
        rep.verification.genus_in_hilbert && rep.verification.genus_span_contained,
        rep.verification.rank_formula_holds,
        rep.verification.real_place.confirms_e_two()
    ));
    for w in warnings {
        out.push_str(&format!("WARNING: {w}\n"));
    }
    out
}

fn csv_header() -> String {
    "p,a,case,n,m,lambda,h,eps,rel_disc_coeff,t_ramified,e,rank,genus_gens,hilbert_gens,unramified,independent,genus_in_hilbert,rank_formula,e2_certificate,skip_reason".to_string()
}

fn csv_row(record: &GridRecord) -> String {
    match record {
        GridRecord::Instance(rep) => {
            let j = to_json_report(rep, Vec::new());
            let gens: Vec<String> = j.hilbert_gens.iter().map(|g| g.display.clone()).collect();
            format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},",
                j.p,
                j.a,
                j.case,
                j.n,
                j.m,
                j.lambda.map(|l| l.to_string()).unwrap_or_default(),
                j.h,
                j.eps_display(),
                j.rel_disc_coeff,
                j.t_ramified,
                j.e,
                j.rank,
                j.genus_gens.join(";"),
                gens.join(";"),
                j.checks.unramified.join(";"),
                j.checks.independent,
                j.checks.genus_in_hilbert,
                j.checks.rank_formula,
                j.checks.e2_certificate,
            )
        }
        GridRecord::Skipped { p, a, reason } => {
            let a = a.map(|a| a.to_string()).unwrap_or_default();
            format!("{p},{a},,,,,,,,,,,,,,,,,,{}", reason.replace(',', ";"))
        }
    }
}

impl JsonReport {
    fn eps_display(&self) -> String {
        let elem = crate::quadfield::QuadElem::new(
            self.eps.s.parse::<num_bigint::BigInt>().unwrap(),
            self.eps.t.parse::<num_bigint::BigInt>().unwrap(),
            self.eps.den,
            self.p,
        )
        .unwrap();
        elem.to_string()
    }
}

// ---------------------------------------------------------------------------
// command execution

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::InvalidP(_)
        | Error::InvalidA { .. }
        | Error::NotSquarefree(_)
        | Error::MalformedStandardForm(_)
        | Error::ParseElement { .. } => EXIT_INVALID_INPUT,
        Error::SearchExhausted { .. } => EXIT_CAP_EXHAUSTED,
        _ => EXIT_VERIFICATION_FAILURE,
    }
}

fn resolve_with_override(
    p: u64,
    a: u64,
    case_override: &Option<String>,
) -> Result<(CaseProfile, Vec<String>), Error> {
    let profile = crate::fieldcase::resolve(p, a)?;
    let mut warnings = Vec::new();
    let profile = match case_override {
        None => profile,
        Some(tag_text) => {
            let tag = ACase::parse(tag_text).ok_or_else(|| Error::InvalidA {
                a,
                reason: format!("unknown case tag {tag_text:?}"),
            })?;
            let computed = profile.a_case;
            let profile = profile.with_case_override(tag)?;
            if tag == computed {
                warnings.push(format!(
                    "case override {} matches the computed case; output unchanged",
                    tag.as_str()
                ));
            } else {
                warnings.push(format!(
                    "case override {} in effect: the computed case for a = {} is {}; \
                     generator list, discriminant and rank follow the override, not the arithmetic",
                    tag.as_str(),
                    a,
                    computed.as_str()
                ));
            }
            profile
        }
    };
    Ok((profile, warnings))
}

pub fn run(cli: Cli) -> i32 {
    match run_inner(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn run_inner(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Compute {
            p,
            a,
            format,
            case_override,
            strict_lemma43,
            tex,
        } => {
            let (profile, warnings) = resolve_with_override(p, a, &case_override)?;
            let cache = NormCache::new(strict_lemma43);
            let rep = hilbert_genus(&profile, &cache)?;
            for w in &warnings {
                eprintln!("WARNING: {w}");
            }
            match format {
                ComputeFormat::Text => print!("{}", render_text(&rep, &warnings, tex)),
                ComputeFormat::Json => {
                    let json = to_json_report(&rep, warnings);
                    println!("{}", serde_json::to_string_pretty(&json).unwrap());
                }
            }
            Ok(if rep.verification.all_passed() {
                EXIT_OK
            } else {
                EXIT_VERIFICATION_FAILURE
            })
        }
        Command::Genus { p, a } => {
            let profile = crate::fieldcase::resolve(p, a)?;
            let gens = crate::fieldcase::genus_field(&profile);
            println!("p = {}, a = {}, case: {}", p, a, profile.a_case.as_str());
            if gens.is_empty() {
                println!("genus field = K (no generators)");
            } else {
                let list: Vec<String> = gens.iter().map(|g| g.display()).collect();
                println!("genus field generators ({}): {}", list.len(), list.join(", "));
            }
            Ok(EXIT_OK)
        }
        Command::Verify { p, a, strict_lemma43 } => {
            let profile = crate::fieldcase::resolve(p, a)?;
            let cache = NormCache::new(strict_lemma43);
            let rep = hilbert_genus(&profile, &cache)?;
            let v = &rep.verification;
            let flag = |ok: bool| if ok { "[ok]  " } else { "[FAIL]" };
            println!("verification for p = {p}, a = {a} (rank {}):", rep.rank);
            for (g, verdict) in rep.hilbert_generators.iter().zip(&v.unramified) {
                println!(
                    "  {} unramified {:<24} -> {}",
                    flag(verdict.passed()),
                    g.display(),
                    verdict.as_str()
                );
            }
            println!("  {} multiplicative independence", flag(v.independent));
            if let Some(w) = &v.witness {
                println!("        dependency witness (indices): {w:?}");
            }
            println!(
                "  {} genus generators contained in hilbert list (and in its F2 span)",
                flag(v.genus_in_hilbert && v.genus_span_contained)
            );
            println!(
                "  {} rank formula: rank = t - e - 1 = {} - {} - 1 = {}",
                flag(v.rank_formula_holds),
                rep.t,
                rep.e,
                rep.t - rep.e - 1
            );
            println!(
                "  {} e = 2 real-place certificate: (-1,delta) = {:?}, (eps,delta) = {:?}, (-eps,delta) = {:?}",
                flag(v.real_place.confirms_e_two()),
                v.real_place.minus_one,
                v.real_place.eps,
                v.real_place.minus_eps
            );
            Ok(if v.all_passed() { EXIT_OK } else { EXIT_VERIFICATION_FAILURE })
        }
        Command::Tabulate {
            p_min,
            p_max,
            a_min,
            a_max,
            format,
            out,
            strict_lemma43,
        } => {
            let spec = GridSpec {
                p_min,
                p_max,
                a_min,
                a_max,
                strict_lemma43,
            };
            let records = evaluate(&spec)?;
            let mut body = String::new();
            match format {
                BatchFormat::Jsonl => {
                    for r in &records {
                        let line = match r {
                            GridRecord::Instance(rep) => {
                                serde_json::to_string(&to_json_report(rep, Vec::new())).unwrap()
                            }
                            GridRecord::Skipped { p, a, reason } => serde_json::to_string(&JsonSkip {
                                p: *p,
                                a: *a,
                                skip: reason.clone(),
                            })
                            .unwrap(),
                        };
                        body.push_str(&line);
                        body.push('\n');
                    }
                }
                BatchFormat::Csv => {
                    body.push_str(&csv_header());
                    body.push('\n');
                    for r in &records {
                        body.push_str(&csv_row(r));
                        body.push('\n');
                    }
                }
            }
            match out {
                Some(path) => {
                    let mut file = std::fs::File::create(&path).map_err(|e| Error::InvalidA {
                        a: 0,
                        reason: format!("cannot write {}: {e}", path.display()),
                    })?;
                    file.write_all(body.as_bytes()).map_err(|e| Error::InvalidA {
                        a: 0,
                        reason: format!("cannot write {}: {e}", path.display()),
                    })?;
                }
                None => print!("{body}"),
            }
            let any_failure = records.iter().any(|r| {
                r.report()
                    .map(|rep| !rep.verification.all_passed())
                    .unwrap_or(false)
            });
            Ok(if any_failure { EXIT_VERIFICATION_FAILURE } else { EXIT_OK })
        }
    }
}
