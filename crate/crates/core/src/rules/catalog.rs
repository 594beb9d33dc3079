//! Catalog file loading and check binding.

use serde::Deserialize;

use super::checks;
use super::{Category, Impact, Registry, Rule, RuleOutcome};
use crate::html::DomTree;

const CATALOG_TOML: &str = include_str!("catalog.toml");

#[derive(Deserialize)]
struct CatalogFile {
    version: String,
    rules: Vec<CatalogRow>,
}

#[derive(Deserialize)]
struct CatalogRow {
    id: String,
    category: Category,
    impact: Impact,
    wcag: String,
    description: String,
    #[serde(default)]
    note: Option<String>,
}

fn check_for(id: &str) -> Option<fn(&DomTree) -> RuleOutcome> {
    Some(match id {
        "region" => checks::check_region,
        "color-contrast" => super::contrast::check_color_contrast,
        "link-name" => checks::check_link_name,
        "image-alt" => checks::check_image_alt,
        "button-name" => checks::check_button_name,
        "aria-allowed-role" => checks::check_aria_allowed_role,
        "heading-order" => checks::check_heading_order,
        "landmark-unique" => checks::check_landmark_unique,
        "presentation-role-conflict" => checks::check_presentation_role_conflict,
        "empty-heading" => checks::check_empty_heading,
        "aria-hidden-focus" => checks::check_aria_hidden_focus,
        "listitem" => checks::check_listitem,
        "duplicate-id" => checks::check_duplicate_id,
        "label" => checks::check_label,
        "invalid-nesting" => checks::check_invalid_nesting,
        _ => return None,
    })
}

pub(super) fn load_standard() -> Registry {
    let file: CatalogFile = toml::from_str(CATALOG_TOML).expect("embedded catalog parses");
    let rules = file
        .rules
        .into_iter()
        .map(|row| {
            let check = check_for(&row.id)
                .unwrap_or_else(|| panic!("catalog rule {} has no check binding", row.id));
            Rule {
                id: row.id,
                category: row.category,
                impact: row.impact,
                wcag: row.wcag,
                description: row.description,
                note: row.note,
                check,
            }
        })
        .collect();
    Registry::from_parts(file.version, rules)
}
