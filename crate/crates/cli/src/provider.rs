//! Provider construction from the resolved config. Each call builds a
//! fresh instance so mock scenario state never leaks across strategies
//! or commands.

use a11y_core::llm::{HttpProvider, LlmProvider, MockProvider};

use crate::config::{ProviderKind, RunConfig};
use crate::CliError;

pub fn build(config: &RunConfig) -> Result<Option<Box<dyn LlmProvider>>, CliError> {
    match config.provider_kind {
        ProviderKind::None => Ok(None),
        ProviderKind::Mock => {
            let script = config.mock_script.as_ref().expect("checked at config load");
            let provider =
                MockProvider::from_file(script).map_err(|e| CliError::Provider(e.to_string()))?;
            Ok(Some(Box::new(provider)))
        }
        ProviderKind::Http => {
            if config.http.base_url.is_empty() {
                return Err(CliError::Config(
                    "provider.base_url is required for the http provider".into(),
                ));
            }
            let provider =
                HttpProvider::new(&config.http).map_err(|e| CliError::Provider(e.to_string()))?;
            Ok(Some(Box::new(provider)))
        }
    }
}
