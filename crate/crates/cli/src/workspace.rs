//! Workspace files (`*.blab.json`): a variable list, an optional base/fiber
//! split and named expressions.
//!
//! ```json
//! {"version": 1, "vars": ["x", "y", "u"], "fiber_split": [2, 1],
//!  "defs": {"P": "@x^@y", "U": "du#@u"}}
//! ```

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use bracketlab_core::VarContext;
use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};

use crate::expr::{mentioned_variables, parse, ParseError, Scope, Value};

pub const WORKSPACE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WorkspaceFile {
    version: u32,
    vars: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fiber_split: Option<[usize; 2]>,
    #[serde(default, deserialize_with = "unique_map")]
    defs: BTreeMap<String, String>,
}

/// Like the default map deserializer, but duplicate keys are an error
/// instead of last-one-wins.
fn unique_map<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<String, String>, D::Error> {
    struct V;
    impl<'de> Visitor<'de> for V {
        type Value = BTreeMap<String, String>;
        fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write!(f, "a map from names to expression strings")
        }
        fn visit_map<M: MapAccess<'de>>(self, mut m: M) -> Result<Self::Value, M::Error> {
            let mut out = BTreeMap::new();
            while let Some((k, v)) = m.next_entry::<String, String>()? {
                if out.contains_key(&k) {
                    return Err(serde::de::Error::custom(format!(
                        "duplicate definition {k:?}"
                    )));
                }
                out.insert(k, v);
            }
            Ok(out)
        }
    }
    d.deserialize_map(V)
}

#[derive(Debug, thiserror::Error)]
pub enum WorkspaceError {
    #[error("cannot read workspace {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed workspace: {0}")]
    Format(String),
    #[error("definition {name:?}: {source}")]
    Definition { name: String, source: ParseError },
    #[error("definition {name:?} does not print back to itself: {printed:?}")]
    RoundTrip { name: String, printed: String },
}

#[derive(Clone, Debug)]
pub struct Workspace {
    ctx: Arc<VarContext>,
    fiber_split: Option<(usize, usize)>,
    defs: BTreeMap<String, String>,
}

impl Workspace {
    pub fn new(ctx: Arc<VarContext>) -> Self {
        Workspace {
            ctx,
            fiber_split: None,
            defs: BTreeMap::new(),
        }
    }

    /// The variables mentioned by `sources`, sorted by name so the order
    /// does not depend on the order of the arguments.
    pub fn inferred<S: AsRef<str>>(sources: &[S]) -> Result<Self, WorkspaceError> {
        let mut names = Vec::new();
        for s in sources {
            let found = mentioned_variables(s.as_ref(), &HashSet::new())
                .map_err(|e| WorkspaceError::Format(format!("{e} in {:?}", s.as_ref())))?;
            names.extend(found);
        }
        names.sort();
        names.dedup();
        if names.is_empty() {
            return Err(WorkspaceError::Format(
                "no variables found; pass --vars".into(),
            ));
        }
        let ctx = context(&names)?;
        Ok(Workspace::new(ctx))
    }

    pub fn ctx(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn fiber_split(&self) -> Option<(usize, usize)> {
        self.fiber_split
    }

    pub fn defs(&self) -> &BTreeMap<String, String> {
        &self.defs
    }

    pub fn define(&mut self, name: &str, src: &str) -> Result<Value, WorkspaceError> {
        self.check_name(name)?;
        let mut defs = self.defs.clone();
        defs.insert(name.to_string(), src.to_string());
        let v = parse(
            src,
            &Scope {
                ctx: self.ctx.clone(),
                defs: &defs,
            },
        )
        .map_err(|source| WorkspaceError::Definition {
            name: name.to_string(),
            source,
        })?;
        self.defs = defs;
        Ok(v)
    }

    pub fn parse(&self, src: &str) -> Result<Value, ParseError> {
        parse(
            src,
            &Scope {
                ctx: self.ctx.clone(),
                defs: &self.defs,
            },
        )
    }

    fn check_name(&self, name: &str) -> Result<(), WorkspaceError> {
        let ok = name
            .chars()
            .next()
            .is_some_and(|c| c.is_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_alphanumeric() || c == '_');
        if !ok {
            return Err(WorkspaceError::Format(format!(
                "bad definition name {name:?}"
            )));
        }
        let shadows = self.ctx.index_of(name).is_some()
            || name
                .strip_prefix('d')
                .is_some_and(|v| self.ctx.index_of(v).is_some());
        if shadows {
            return Err(WorkspaceError::Format(format!(
                "definition {name:?} shadows a variable or its differential"
            )));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self, WorkspaceError> {
        let file: WorkspaceFile =
            serde_json::from_str(text).map_err(|e| WorkspaceError::Format(e.to_string()))?;
        if file.version != WORKSPACE_VERSION {
            return Err(WorkspaceError::Format(format!(
                "unsupported version {} (expected {WORKSPACE_VERSION})",
                file.version
            )));
        }
        let ctx = context(&file.vars)?;
        let fiber_split = match file.fiber_split {
            Some([m, r]) if m + r == ctx.n() && m > 0 && r > 0 => Some((m, r)),
            Some([m, r]) => {
                return Err(WorkspaceError::Format(format!(
                    "fiber_split [{m}, {r}] does not split {} variables",
                    ctx.n()
                )))
            }
            None => None,
        };
        let mut ws = Workspace {
            ctx,
            fiber_split,
            defs: file.defs,
        };
        for name in ws.defs.keys() {
            ws.check_name(name)?;
        }
        ws.validate()?;
        ws.fiber_split = fiber_split;
        Ok(ws)
    }

    pub fn load(path: &Path) -> Result<Self, WorkspaceError> {
        let text = std::fs::read_to_string(path).map_err(|source| WorkspaceError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let file = WorkspaceFile {
            version: WORKSPACE_VERSION,
            vars: self.ctx.names().to_vec(),
            fiber_split: self.fiber_split.map(|(m, r)| [m, r]),
            defs: self.defs.clone(),
        };
        serde_json::to_string_pretty(&file).expect("plain data")
    }

    /// Every definition parses, and its printed form parses back to the
    /// same element. Returns the printed forms.
    pub fn validate(&self) -> Result<BTreeMap<String, String>, WorkspaceError> {
        let mut out = BTreeMap::new();
        for name in self.defs.keys() {
            let v = self
                .parse(name)
                .map_err(|source| WorkspaceError::Definition {
                    name: name.clone(),
                    source,
                })?;
            let printed = v.to_string();
            let back = self.parse(&printed).ok();
            if !back.is_some_and(|b| b.same(&v)) {
                return Err(WorkspaceError::RoundTrip {
                    name: name.clone(),
                    printed,
                });
            }
            out.insert(name.clone(), printed);
        }
        Ok(out)
    }
}

/// A variable context whose names cannot be confused with differentials.
pub fn context<S: AsRef<str>>(names: &[S]) -> Result<Arc<VarContext>, WorkspaceError> {
    let ctx = VarContext::new(names).map_err(|e| WorkspaceError::Format(e.to_string()))?;
    for n in ctx.names() {
        if let Some(v) = n.strip_prefix('d') {
            if ctx.index_of(v).is_some() {
                return Err(WorkspaceError::Format(format!(
                    "variable {n:?} clashes with the differential of {v:?}"
                )));
            }
        }
    }
    Ok(ctx)
}
