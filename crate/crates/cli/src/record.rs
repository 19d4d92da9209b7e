//! One row of the search/verify output, with the staged evaluation that
//! fills it: congruences, then residue symbols, then the unit conditions,
//! then predictions. Cheap filters run first; the Pell stage runs last and
//! a digit-cap abort is recorded in the row instead of failing the run.

use serde::{Deserialize, Serialize};

use quadclass::family::{self, FamilyError, FamilyParams};
use quadclass::predict::{self, PredictError};
use quadclass::quadfield::QuadError;
use quadclass::{arith, quadfield};

/// Row status: `Ok` means every reachable stage ran to completion (whether
/// or not the hypotheses hold); the other two name why evaluation stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "ok")]
    Ok,
    #[serde(rename = "unit-too-large")]
    UnitTooLarge,
    #[serde(rename = "hypothesis-failed")]
    HypothesisFailed,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::UnitTooLarge => "unit-too-large",
            Status::HypothesisFailed => "hypothesis-failed",
        }
    }
}

/// How deep the prediction stage goes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictionDepth {
    /// Norm and quartic conditions included: the full bundle with the
    /// Galois classification.
    FullTheorem,
    /// Square-condition level only: the biquadratic structures, no
    /// classification.
    CorollaryOnly,
}

/// Flat record of one (eta, q, r, s) candidate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleRecord {
    pub eta: u64,
    pub q: u64,
    pub r: u64,
    pub s: u64,
    pub cong_ok: bool,
    pub leg_ok: bool,
    pub rs_ok: bool,
    pub quartic_neq: Option<bool>,
    pub norm_rs: Option<i32>,
    pub square_cond: Option<bool>,
    pub branch: Option<String>,
    pub m: Option<u32>,
    #[serde(rename = "A_F")]
    pub a_f: Option<String>,
    #[serde(rename = "A_K")]
    pub a_k: Option<String>,
    #[serde(rename = "A_Kp")]
    pub a_kp: Option<String>,
    #[serde(rename = "A_FF")]
    pub a_ff: Option<String>,
    pub galois: Option<String>,
    pub status: Status,
}

/// CSV column order; JSON objects carry the same keys.
pub const CSV_COLUMNS: [&str; 18] = [
    "eta",
    "q",
    "r",
    "s",
    "cong_ok",
    "leg_ok",
    "rs_ok",
    "quartic_neq",
    "norm_rs",
    "square_cond",
    "branch",
    "m",
    "A_F",
    "A_K",
    "A_Kp",
    "A_FF",
    "galois",
    "status",
];

/// Evaluate one candidate through the staged pipeline.
///
/// The inputs must be distinct primes with eta in {1, 2}; those are the
/// caller's usage contract (the CLI maps violations to exit code 2).
pub fn evaluate_triple(
    q: u64,
    r: u64,
    s: u64,
    eta: u64,
    digit_cap: u64,
    depth: PredictionDepth,
) -> Result<TripleRecord, FamilyError> {
    let mut rec = TripleRecord {
        eta,
        q,
        r,
        s,
        cong_ok: q % 4 == 3 && r % 8 == 5 && s % 8 == 5,
        leg_ok: false,
        rs_ok: false,
        quartic_neq: None,
        norm_rs: None,
        square_cond: None,
        branch: None,
        m: None,
        a_f: None,
        a_k: None,
        a_kp: None,
        a_ff: None,
        galois: None,
        status: Status::HypothesisFailed,
    };
    // symbol stage
    let expected = if eta == 2 { -1 } else { 1 };
    rec.leg_ok = arith::legendre_u64(q, r) == expected && arith::legendre_u64(q, s) == expected;
    rec.rs_ok = arith::legendre_u64(r, s) == 1;
    if rec.rs_ok {
        rec.quartic_neq = Some(arith::quartic_u64(r, s) != arith::quartic_u64(s, r));
        rec.norm_rs = Some(quadfield::unit_norm(r * s).map_err(FamilyError::Quad)?);
    }
    if !(rec.cong_ok && rec.leg_ok && rec.rs_ok) {
        return Ok(rec);
    }
    let params = FamilyParams::new(q, r, s, eta)?;

    // unit stage (the expensive one)
    let tri = match family::unit_trichotomy(&params, digit_cap) {
        Ok(tri) => tri,
        Err(FamilyError::Quad(QuadError::UnitTooLarge { .. })) => {
            rec.status = Status::UnitTooLarge;
            return Ok(rec);
        }
        Err(e) => return Err(e),
    };
    rec.branch = Some(tri.which.as_str().to_string());
    rec.square_cond = Some(tri.which != family::Branch::Q);
    rec.status = Status::Ok;

    // prediction stage
    if rec.square_cond == Some(true) {
        rec.m = Some(predict::derive_m(&params).map_err(flatten_predict)?);
        match predict::predict_biquadratic(&params, digit_cap) {
            Ok((a_kp, a_k)) => {
                rec.a_kp = Some(a_kp.to_string());
                rec.a_k = a_k.map(|t| t.to_string());
            }
            Err(PredictError::Gate(_)) => {}
            Err(e) => return Err(flatten_predict(e)),
        }
        if depth == PredictionDepth::FullTheorem {
            match predict::predict_quadratic(&params, digit_cap) {
                Ok(pred) => {
                    rec.a_f = Some(pred.a_f.to_string());
                    rec.a_ff = pred.a_ff.map(|t| t.to_string());
                    rec.galois = Some(pred.galois.as_str().to_string());
                }
                Err(PredictError::Gate(_)) => {}
                Err(e) => return Err(flatten_predict(e)),
            }
        }
    }
    Ok(rec)
}

fn flatten_predict(e: PredictError) -> FamilyError {
    match e {
        PredictError::Family(f) => f,
        other => panic!("unexpected prediction failure: {other}"),
    }
}

impl TripleRecord {
    /// Fields in CSV column order, missing values as empty strings.
    pub fn csv_fields(&self) -> Vec<String> {
        fn opt_bool(v: Option<bool>) -> String {
            v.map(|b| b.to_string()).unwrap_or_default()
        }
        vec![
            self.eta.to_string(),
            self.q.to_string(),
            self.r.to_string(),
            self.s.to_string(),
            self.cong_ok.to_string(),
            self.leg_ok.to_string(),
            self.rs_ok.to_string(),
            opt_bool(self.quartic_neq),
            self.norm_rs.map(|n| format!("{n:+}")).unwrap_or_default(),
            opt_bool(self.square_cond),
            self.branch.clone().unwrap_or_default(),
            self.m.map(|m| m.to_string()).unwrap_or_default(),
            self.a_f.clone().unwrap_or_default(),
            self.a_k.clone().unwrap_or_default(),
            self.a_kp.clone().unwrap_or_default(),
            self.a_ff.clone().unwrap_or_default(),
            self.galois.clone().unwrap_or_default(),
            self.status.as_str().to_string(),
        ]
    }

    /// Parse one CSV row back (for the round-trip equality test).
    pub fn from_csv_fields(fields: &[String]) -> Option<TripleRecord> {
        if fields.len() != CSV_COLUMNS.len() {
            return None;
        }
        fn opt_bool(s: &str) -> Option<bool> {
            (!s.is_empty()).then(|| s == "true")
        }
        fn opt_str(s: &str) -> Option<String> {
            (!s.is_empty()).then(|| s.to_string())
        }
        Some(TripleRecord {
            eta: fields[0].parse().ok()?,
            q: fields[1].parse().ok()?,
            r: fields[2].parse().ok()?,
            s: fields[3].parse().ok()?,
            cong_ok: fields[4] == "true",
            leg_ok: fields[5] == "true",
            rs_ok: fields[6] == "true",
            quartic_neq: opt_bool(&fields[7]),
            norm_rs: (!fields[8].is_empty())
                .then(|| fields[8].parse().ok())
                .flatten(),
            square_cond: opt_bool(&fields[9]),
            branch: opt_str(&fields[10]),
            m: (!fields[11].is_empty())
                .then(|| fields[11].parse().ok())
                .flatten(),
            a_f: opt_str(&fields[12]),
            a_k: opt_str(&fields[13]),
            a_kp: opt_str(&fields[14]),
            a_ff: opt_str(&fields[15]),
            galois: opt_str(&fields[16]),
            status: match fields[17].as_str() {
                "ok" => Status::Ok,
                "unit-too-large" => Status::UnitTooLarge,
                _ => Status::HypothesisFailed,
            },
        })
    }

    /// Multi-line human-readable trace with recomputed cross-checks.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        let push = |out: &mut String, k: &str, v: String| {
            out.push_str(&format!("  {k:<14} {v}\n"));
        };
        out.push_str(&format!(
            "triple (q, r, s) = ({}, {}, {}), eta = {}\n",
            self.q, self.r, self.s, self.eta
        ));
        push(&mut out, "congruences", self.cong_ok.to_string());
        push(&mut out, "legendre", self.leg_ok.to_string());
        push(&mut out, "(r/s) = 1", self.rs_ok.to_string());
        if let Some(qd) = self.quartic_neq {
            push(&mut out, "quartic neq", qd.to_string());
        }
        if let Some(n) = self.norm_rs {
            push(&mut out, "N(eps_rs)", format!("{n:+}"));
        }
        if let Some(sc) = self.square_cond {
            push(&mut out, "square cond", sc.to_string());
        }
        if let Some(b) = &self.branch {
            push(&mut out, "branch", b.clone());
        }
        if let Some(m) = self.m {
            push(&mut out, "m", m.to_string());
        }
        for (label, value) in [
            ("A(F)", &self.a_f),
            ("A(K)", &self.a_k),
            ("A(K')", &self.a_kp),
            ("A(FF)", &self.a_ff),
            ("galois", &self.galois),
        ] {
            if let Some(v) = value {
                push(&mut out, label, v.clone());
            }
        }
        push(&mut out, "status", self.status.as_str().to_string());

        // recomputed cross-checks
        if self.status == Status::Ok && self.cong_ok && self.leg_ok && self.rs_ok {
            let (q, r, s, eta) = (self.q, self.r, self.s, self.eta);
            if let (Ok(h_qrs), Ok(h_2qrs), Ok(h_eta)) = (
                quadfield::h2(q * r * s),
                quadfield::h2(2 * q * r * s),
                quadfield::h2(eta * q * r * s),
            ) {
                push(
                    &mut out,
                    "h2 identity",
                    format!(
                        "h2(qrs) h2(2qrs) = {} = 4 h2(eta qrs) = {}: {}",
                        h_qrs * h_2qrs,
                        4 * h_eta,
                        if h_qrs * h_2qrs == 4 * h_eta {
                            "exact"
                        } else {
                            "VIOLATED"
                        }
                    ),
                );
                if let (Some(m), Some(a_f)) = (self.m, &self.a_f) {
                    push(
                        &mut out,
                        "order check",
                        format!("|A(F)| = |{}| = 2^(m+1) = {}", a_f, 1u64 << (m + 1)),
                    );
                }
                if self.a_k.is_some() {
                    if let Ok(params) = FamilyParams::new(q, r, s, eta) {
                        if let Ok((h2k, qk)) = family::h2_k(&params) {
                            push(
                                &mut out,
                                "h2(K) check",
                                format!("h2(K) = {h2k} with q(K) = {qk} via the layer formula"),
                            );
                        }
                    }
                }
                push(&mut out, "note", predict::EXTERNAL_SOURCE_NOTE.to_string());
            }
        }
        out
    }
}

/// Serialize records as the canonical CSV document (header + rows).
pub fn records_to_csv(records: &[TripleRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).expect("csv header");
    for rec in records {
        w.write_record(rec.csv_fields()).expect("csv row");
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("csv utf8")
}

/// Parse a CSV document produced by [`records_to_csv`].
pub fn records_from_csv(body: &str) -> Option<Vec<TripleRecord>> {
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.ok()?;
        let fields: Vec<String> = row.iter().map(|f| f.to_string()).collect();
        out.push(TripleRecord::from_csv_fields(&fields)?);
    }
    Some(out)
}

/// Serialize records as the canonical JSON document.
pub fn records_to_json(records: &[TripleRecord]) -> String {
    serde_json::to_string_pretty(records).expect("json") + "\n"
}
