//! Collecting check results and rendering them.

use rayon::prelude::*;

use crate::checks::{run_record, Check, CheckResult, Settings, Status};
use perfdel::catalog::PolytopeRecord;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report {
    /// Results in catalog order, then check order.
    pub results: Vec<CheckResult>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub budget: usize,
}

/// Run the checks on every record with `jobs` worker threads. The result
/// does not depend on `jobs`.
pub fn verify(records: &[PolytopeRecord], checks: &[Check], settings: &Settings, jobs: usize) -> Report {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().expect("thread pool");
    let per_record: Vec<Vec<CheckResult>> =
        pool.install(|| records.par_iter().map(|r| run_record(r, checks, settings)).collect());
    Report { results: per_record.into_iter().flatten().collect() }
}

impl Report {
    pub fn counts(&self) -> Counts {
        let mut c = Counts::default();
        for r in &self.results {
            match r.status {
                Status::Pass => c.pass += 1,
                Status::Fail => c.fail += 1,
                Status::Skipped => c.skipped += 1,
                Status::Budget => c.budget += 1,
            }
        }
        c
    }

    /// 0 when everything passed or was skipped, 1 on any failure, 3 when
    /// budgets ran out but nothing failed.
    pub fn exit_code(&self) -> i32 {
        let c = self.counts();
        if c.fail > 0 {
            1
        } else if c.budget > 0 {
            3
        } else {
            0
        }
    }

    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            out.push_str(&serde_json::to_string(r).expect("serializable"));
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self, color: bool) -> String {
        let timed = self.results.iter().any(|r| r.millis.is_some());
        let mut rows: Vec<[String; 6]> = vec![[
            "RECORD".into(),
            "CHECK".into(),
            "STATUS".into(),
            "EXPECTED".into(),
            "COMPUTED".into(),
            if timed { "MS".into() } else { String::new() },
        ]];
        for r in &self.results {
            rows.push([
                r.record.clone(),
                r.check.to_string(),
                r.status.to_string(),
                r.expected.clone(),
                r.computed.clone(),
                r.millis.map(|m| m.to_string()).unwrap_or_default(),
            ]);
        }
        let mut width = [0usize; 6];
        for row in &rows {
            for (w, cell) in width.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        for (i, row) in rows.iter().enumerate() {
            let mut line = String::new();
            for (j, cell) in row.iter().enumerate() {
                if j == 5 && !timed {
                    break;
                }
                let pad = width[j] - cell.chars().count();
                if j == 2 && i > 0 && color {
                    line.push_str(&paint(cell));
                } else {
                    line.push_str(cell);
                }
                if j < 4 || (j == 4 && timed) {
                    line.extend(std::iter::repeat_n(' ', pad + 2));
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
            if i > 0 {
                for n in &self.results[i - 1].notes {
                    out.push_str(&format!("{:indent$}note: {n}\n", "", indent = width[0] + 2));
                }
            }
        }
        let c = self.counts();
        out.push_str(&format!(
            "{} checks: {} PASS, {} FAIL, {} SKIPPED, {} BUDGET\n",
            self.results.len(),
            c.pass,
            c.fail,
            c.skipped,
            c.budget
        ));
        out
    }
}

fn paint(status: &str) -> String {
    let code = match status {
        "PASS" => "32",
        "FAIL" => "31",
        "BUDGET" => "33",
        _ => "36",
    };
    format!("\x1b[{code}m{status}\x1b[0m")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn result(status: Status) -> CheckResult {
        CheckResult {
            record: "x".into(),
            check: Check::Perfection,
            expected: "1".into(),
            computed: "1".into(),
            status,
            notes: vec!["n".into()],
            millis: None,
        }
    }

    #[test]
    fn exit_codes() {
        let r = |s: &[Status]| Report { results: s.iter().map(|&x| result(x)).collect() }.exit_code();
        assert_eq!(r(&[Status::Pass, Status::Skipped]), 0);
        assert_eq!(r(&[Status::Pass, Status::Budget]), 3);
        assert_eq!(r(&[Status::Budget, Status::Fail]), 1);
        assert_eq!(r(&[]), 0);
    }

    #[test]
    fn text_layout() {
        let rep = Report { results: vec![result(Status::Pass), result(Status::Fail)] };
        let t = rep.to_text(false);
        let lines: Vec<&str> = t.lines().collect();
        assert!(lines[0].starts_with("RECORD  CHECK       STATUS  EXPECTED  COMPUTED"));
        assert_eq!(lines[1], "x       perfection  PASS    1         1");
        assert_eq!(lines[2], "        note: n");
        assert!(lines.last().unwrap().contains("1 PASS, 1 FAIL"));
        assert!(!t.contains('\x1b'));
        assert!(rep.to_text(true).contains("\x1b[31mFAIL\x1b[0m"));
    }

    #[test]
    fn json_lines() {
        let rep = Report { results: vec![result(Status::Skipped)] };
        let line = rep.to_json_lines();
        let v: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
        assert_eq!(v["status"], "SKIPPED");
        assert_eq!(v["check"], "perfection");
        assert!(v.get("millis").is_none());
    }
}
