//! Run configuration: per-role backend settings, orchestration knobs, and
//! reproducibility parameters, loaded from a TOML file. Credentials come
//! only from environment variables named in the config.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backend::{
    BackendHandle, BackendRole, HttpBackend, HttpBackendConfig, ScriptedBackend,
};
use crate::orchestrator::{DetectionConfig, DEFAULT_BUDGET, DEFAULT_REGEN_CAP};
use crate::toolkit::{no_retrieval, RetrievalHandle};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("no backend configured for role `{0}` (and no [backend.default])")]
    MissingBackend(&'static str),
    #[error("cannot read script file `{path}`: {message}")]
    Script { path: PathBuf, message: String },
    #[error(transparent)]
    Backend(#[from] crate::backend::BackendError),
}

/// One backend definition: either a deterministic script or a live endpoint.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BackendSpec {
    /// JSON file holding an array of response strings, consumed in order.
    Scripted { script: PathBuf },
    Http(HttpBackendConfig),
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct BackendsSection {
    #[serde(default)]
    pub default: Option<BackendSpec>,
    #[serde(default)]
    pub orchestrator: Option<BackendSpec>,
    #[serde(default)]
    pub tool: Option<BackendSpec>,
    #[serde(default)]
    pub integrator: Option<BackendSpec>,
    #[serde(default)]
    pub generator: Option<BackendSpec>,
}

impl BackendsSection {
    fn for_role(&self, role: BackendRole) -> Option<&BackendSpec> {
        let specific = match role {
            BackendRole::Orchestrator => &self.orchestrator,
            BackendRole::Tool => &self.tool,
            BackendRole::Integrator => &self.integrator,
            BackendRole::Generator => &self.generator,
        };
        specific.as_ref().or(self.default.as_ref())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSection {
    #[serde(default = "default_budget")]
    pub budget: u32,
    #[serde(default = "default_regen_cap")]
    pub regen_cap: u32,
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
    #[serde(default)]
    pub seed: u64,
    /// Provenance label stamped on generated reviews.
    #[serde(default)]
    pub generator_id: Option<String>,
}

fn default_budget() -> u32 {
    DEFAULT_BUDGET
}

fn default_regen_cap() -> u32 {
    DEFAULT_REGEN_CAP
}

fn default_parallelism() -> usize {
    1
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            budget: DEFAULT_BUDGET,
            regen_cap: DEFAULT_REGEN_CAP,
            parallelism: 1,
            seed: 0,
            generator_id: None,
        }
    }
}

/// Optional default input/output locations, overridable by CLI flags.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct PathsSection {
    #[serde(default)]
    pub papers: Option<PathBuf>,
    #[serde(default)]
    pub reviews: Option<PathBuf>,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub backend: BackendsSection,
    #[serde(default)]
    pub paths: PathsSection,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let config: RunConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.run.budget < 1 {
            return Err(ConfigError::Invalid("run.budget must be >= 1".into()));
        }
        if self.run.parallelism < 1 {
            return Err(ConfigError::Invalid("run.parallelism must be >= 1".into()));
        }
        Ok(())
    }

    pub fn detection(&self) -> DetectionConfig {
        DetectionConfig { budget: self.run.budget, regen_cap: self.run.regen_cap }
    }
}

/// Backend handles per role, built once from config. Scripted backends are
/// stateful: the script is consumed across all sessions sharing the set.
#[derive(Clone)]
pub struct BackendSet {
    handles: BTreeMap<BackendRole, BackendHandle>,
    pub retrieval: RetrievalHandle,
    pub any_scripted: bool,
}

impl BackendSet {
    pub fn from_handles(
        orchestrator: BackendHandle,
        tool: BackendHandle,
        integrator: BackendHandle,
        generator: BackendHandle,
        retrieval: RetrievalHandle,
        any_scripted: bool,
    ) -> Self {
        let handles = BTreeMap::from([
            (BackendRole::Orchestrator, orchestrator),
            (BackendRole::Tool, tool),
            (BackendRole::Integrator, integrator),
            (BackendRole::Generator, generator),
        ]);
        BackendSet { handles, retrieval, any_scripted }
    }

    pub fn get(&self, role: BackendRole) -> &BackendHandle {
        &self.handles[&role]
    }

    pub fn session_backends(&self) -> crate::orchestrator::SessionBackends {
        crate::orchestrator::SessionBackends {
            orchestrator: self.get(BackendRole::Orchestrator).clone(),
            tool: self.get(BackendRole::Tool).clone(),
            integrator: self.get(BackendRole::Integrator).clone(),
            retrieval: self.retrieval.clone(),
        }
    }

    /// Builds one handle per role from the config. Roles sharing the same
    /// scripted spec share one script state only when routed through
    /// `[backend.default]`; per-role scripted specs get their own state.
    pub fn build(config: &RunConfig) -> Result<Self, ConfigError> {
        let mut handles = BTreeMap::new();
        let mut any_scripted = false;
        let mut shared_default: Option<BackendHandle> = None;
        let mut default_is_scripted = false;
        for role in BackendRole::ALL {
            let spec = config
                .backend
                .for_role(role)
                .ok_or(ConfigError::MissingBackend(role.as_str()))?;
            let is_default_route = match role {
                BackendRole::Orchestrator => config.backend.orchestrator.is_none(),
                BackendRole::Tool => config.backend.tool.is_none(),
                BackendRole::Integrator => config.backend.integrator.is_none(),
                BackendRole::Generator => config.backend.generator.is_none(),
            };
            let handle = if is_default_route {
                if shared_default.is_none() {
                    let built = build_handle(spec)?;
                    default_is_scripted = matches!(spec, BackendSpec::Scripted { .. });
                    shared_default = Some(built);
                }
                if default_is_scripted {
                    any_scripted = true;
                }
                shared_default.clone().expect("just built")
            } else {
                if matches!(spec, BackendSpec::Scripted { .. }) {
                    any_scripted = true;
                }
                build_handle(spec)?
            };
            handles.insert(role, handle);
        }
        Ok(BackendSet { handles, retrieval: no_retrieval(), any_scripted })
    }

    /// Scripted backends serialize calls, so batch work must stay sequential
    /// to keep runs byte-reproducible.
    pub fn effective_parallelism(&self, requested: usize) -> usize {
        if self.any_scripted {
            1
        } else {
            requested.max(1)
        }
    }
}

fn build_handle(spec: &BackendSpec) -> Result<BackendHandle, ConfigError> {
    match spec {
        BackendSpec::Scripted { script } => {
            let text = std::fs::read_to_string(script).map_err(|e| ConfigError::Script {
                path: script.clone(),
                message: e.to_string(),
            })?;
            let entries: Vec<String> =
                serde_json::from_str(&text).map_err(|e| ConfigError::Script {
                    path: script.clone(),
                    message: format!("expected a JSON array of strings: {e}"),
                })?;
            Ok(Arc::new(ScriptedBackend::new(entries)))
        }
        BackendSpec::Http(http) => Ok(Arc::new(HttpBackend::new(http.clone())?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let text = r#"
            [run]
            budget = 6
            regen_cap = 2
            parallelism = 4
            seed = 7
            generator_id = "gen-a"

            [backend.default]
            kind = "http"
            endpoint = "http://localhost:8000/v1/chat/completions"
            model = "some-model"
            api_key_env = "REVAUDIT_API_KEY"

            [backend.integrator]
            kind = "http"
            endpoint = "http://localhost:8001/v1/chat/completions"
            model = "small-model"
        "#;
        let config = RunConfig::parse(text).unwrap();
        assert_eq!(config.run.budget, 6);
        assert_eq!(config.run.seed, 7);
        assert!(matches!(
            config.backend.for_role(BackendRole::Integrator),
            Some(BackendSpec::Http(h)) if h.model == "small-model"
        ));
        assert!(matches!(
            config.backend.for_role(BackendRole::Tool),
            Some(BackendSpec::Http(h)) if h.model == "some-model"
        ));
    }

    #[test]
    fn rejects_zero_budget() {
        let text = "[run]\nbudget = 0\n";
        assert!(matches!(RunConfig::parse(text), Err(ConfigError::Invalid(_))));
    }

    #[test]
    fn missing_backend_named() {
        let config = RunConfig::default();
        match BackendSet::build(&config) {
            Err(ConfigError::MissingBackend(role)) => assert_eq!(role, "orchestrator"),
            Err(other) => panic!("expected missing backend, got {other}"),
            Ok(_) => panic!("expected missing backend"),
        }
    }

    #[tokio::test]
    async fn scripted_backends_build_and_force_serial() {
        let dir = tempfile::tempdir().unwrap();
        let script = dir.path().join("script.json");
        std::fs::write(&script, serde_json::to_string(&vec!["a", "b"]).unwrap()).unwrap();
        let text = format!(
            "[backend.default]\nkind = \"scripted\"\nscript = {:?}\n",
            script.to_string_lossy()
        );
        let config = RunConfig::parse(&text).unwrap();
        let set = BackendSet::build(&config).unwrap();
        assert!(set.any_scripted);
        assert_eq!(set.effective_parallelism(8), 1);

        // All four roles share the default script state.
        let req = {
            let mut r = crate::backend::role_defaults(BackendRole::Tool);
            r.system_prompt = "s".into();
            r.messages.push(crate::backend::ChatMessage::user("u"));
            r
        };
        let first = set.get(BackendRole::Orchestrator).complete(&req).await.unwrap();
        let second = set.get(BackendRole::Tool).complete(&req).await.unwrap();
        assert_eq!((first.content.as_str(), second.content.as_str()), ("a", "b"));
    }
}
