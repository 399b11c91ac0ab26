//! Shipped sweep configurations, one per figure.

use crate::config::{parse_config, ConfigError, SweepSpec};

pub const PRESETS: [(&str, &str); 7] = [
    ("fig2", include_str!("../presets/fig2.toml")),
    ("fig3", include_str!("../presets/fig3.toml")),
    ("fig4", include_str!("../presets/fig4.toml")),
    ("fig5", include_str!("../presets/fig5.toml")),
    ("fig6", include_str!("../presets/fig6.toml")),
    ("fig7", include_str!("../presets/fig7.toml")),
    ("fig8", include_str!("../presets/fig8.toml")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}

pub fn preset_text(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn load_preset(name: &str) -> Result<SweepSpec, ConfigError> {
    let text = preset_text(name).ok_or_else(|| ConfigError {
        line: None,
        message: format!(
            "unknown preset `{name}` (expected one of: {})",
            names().collect::<Vec<_>>().join(", ")
        ),
    })?;
    parse_config(text)
}
