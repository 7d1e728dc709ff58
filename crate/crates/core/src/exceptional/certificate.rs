use serde::Serialize;

/// Version tag carried by every serialized certificate.
pub const CERTIFICATE_SCHEMA: &str = "symflow.certificate/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Less,
    #[serde(rename = "<=")]
    LessEq,
    #[serde(rename = "==")]
    Equal,
}

/// One inequality `lhs rel rhs`, checked with tolerance `tol` (for `<=` and
/// `==`; strict inequalities use no slack).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Step {
    pub id: String,
    pub name: String,
    pub lhs: f64,
    pub relation: Relation,
    pub rhs: f64,
    pub tolerance: f64,
    pub oracle: String,
    pub holds: bool,
}

impl Step {
    pub fn new(id: &str, name: &str, lhs: f64, relation: Relation, rhs: f64, tolerance: f64, oracle: &str) -> Self {
        let mut s = Self {
            id: id.into(),
            name: name.into(),
            lhs,
            relation,
            rhs,
            tolerance,
            oracle: oracle.into(),
            holds: false,
        };
        s.holds = s.check();
        s
    }

    pub fn check(&self) -> bool {
        match self.relation {
            Relation::Less => self.lhs < self.rhs,
            Relation::LessEq => self.lhs <= self.rhs + self.tolerance,
            Relation::Equal => (self.lhs - self.rhs).abs() <= self.tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub schema: &'static str,
    pub claim: String,
    pub steps: Vec<Step>,
    /// Values reported for information only; they do not affect `pass`.
    pub diagnostics: Vec<(String, f64)>,
    pub notes: Vec<String>,
    pub pass: bool,
}

impl Certificate {
    pub fn new(claim: &str) -> Self {
        Self {
            schema: CERTIFICATE_SCHEMA,
            claim: claim.into(),
            steps: Vec::new(),
            diagnostics: Vec::new(),
            notes: Vec::new(),
            pass: true,
        }
    }

    pub fn push(&mut self, step: Step) -> bool {
        let ok = step.holds;
        self.pass &= ok;
        self.steps.push(step);
        ok
    }

    pub fn diagnostic(&mut self, name: &str, value: f64) {
        self.diagnostics.push((name.into(), value));
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn fail(&mut self, text: impl Into<String>) {
        self.pass = false;
        self.notes.push(text.into());
    }

    pub fn step(&self, id: &str) -> Option<&Step> {
        self.steps.iter().find(|s| s.id == id)
    }

    /// Re-evaluates every recorded step; `pass` must equal the conjunction.
    pub fn replay(&self) -> bool {
        self.steps.iter().all(|s| s.check() == s.holds)
            && (self.pass == (self.steps.iter().all(|s| s.holds) && self.pass))
    }

    /// Human-readable chain, one step per line.
    pub fn render(&self) -> String {
        let mut out = format!("{}\n", self.claim);
        for s in &self.steps {
            let rel = match s.relation {
                Relation::Less => "<",
                Relation::LessEq => "<=",
                Relation::Equal => "==",
            };
            out.push_str(&format!(
                "  [{}] {:<4} {}: {:.12} {} {:.12} (tol {:e}; {})\n",
                if s.holds { "ok" } else { "FAIL" },
                s.id,
                s.name,
                s.lhs,
                rel,
                s.rhs,
                s.tolerance,
                s.oracle
            ));
        }
        for (k, v) in &self.diagnostics {
            out.push_str(&format!("  {k} = {v:.12}\n"));
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out.push_str(if self.pass { "PASS\n" } else { "FAIL\n" });
        out
    }
}
