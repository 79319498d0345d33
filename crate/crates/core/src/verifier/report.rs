use serde::Serialize;

use super::{IdentityReport, Mismatch, Params, Status};

#[derive(Serialize)]
struct MismatchJson<'a> {
    monomial: &'a str,
    lhs: &'a str,
    rhs: &'a str,
}

#[derive(Serialize)]
struct ResultJson<'a> {
    id: &'a str,
    params: &'a Params,
    status: &'static str,
    mismatch: Option<MismatchJson<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_us: Option<u64>,
}

#[derive(Serialize, Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
}

impl Summary {
    pub fn of(reports: &[IdentityReport]) -> Self {
        let mut s = Summary::default();
        for r in reports {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Error => s.error += 1,
            }
        }
        s
    }

    pub fn all_pass(&self) -> bool {
        self.fail == 0 && self.error == 0
    }
}

/// A named batch of reports with its serialization.
pub struct SuiteReport<'a> {
    pub suite: String,
    pub reports: &'a [IdentityReport],
    pub timing: bool,
}

#[derive(Serialize)]
struct SuiteJson<'a> {
    suite: &'a str,
    results: Vec<ResultJson<'a>>,
    summary: Summary,
}

impl SuiteReport<'_> {
    pub fn summary(&self) -> Summary {
        Summary::of(self.reports)
    }

    /// Pretty-printed JSON with a fixed key order; elapsed times only when
    /// timing was requested.
    pub fn to_json(&self) -> String {
        let results = self
            .reports
            .iter()
            .map(|r| ResultJson {
                id: &r.id,
                params: &r.params,
                status: r.status.as_str(),
                mismatch: r.mismatch.as_ref().map(|m: &Mismatch| MismatchJson {
                    monomial: &m.monomial,
                    lhs: &m.lhs,
                    rhs: &m.rhs,
                }),
                elapsed_us: self.timing.then_some(r.elapsed.as_micros() as u64),
            })
            .collect();
        let doc = SuiteJson {
            suite: &self.suite,
            results,
            summary: self.summary(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in self.reports {
            out.push_str(&format!(
                "{:<5} {}",
                r.status.as_str().to_uppercase(),
                cell_label(r)
            ));
            if let Some(m) = &r.mismatch {
                out.push_str(&format!(
                    "  first mismatch at {}: lhs {}, rhs {}",
                    m.monomial, m.lhs, m.rhs
                ));
            }
            if let Some(msg) = &r.message {
                out.push_str(&format!("  {msg}"));
            }
            if self.timing {
                out.push_str(&format!("  [{} us]", r.elapsed.as_micros()));
            }
            out.push('\n');
        }
        let s = self.summary();
        out.push_str(&format!(
            "{}: {} pass, {} fail, {} error\n",
            self.suite, s.pass, s.fail, s.error
        ));
        out
    }
}

fn cell_label(r: &IdentityReport) -> String {
    let mut s = r.id.clone();
    for (k, v) in &r.params {
        s.push_str(&format!(" {k}={v}"));
    }
    s
}

/// One line per report: `id name=value ... status`.
pub fn status_table(reports: &[IdentityReport]) -> String {
    reports
        .iter()
        .map(|r| format!("{} {}\n", cell_label(r), r.status.as_str()))
        .collect()
}
