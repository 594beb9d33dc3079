//! Static WCAG 2 AA contrast checking.
//!
//! Colors are resolved only from inline `style` attributes and flat
//! embedded stylesheets with tag/id/class selectors — no cascade, and no
//! inheritance beyond the nearest ancestor with an explicit background.
//! Elements whose colors cannot be resolved statically are skipped and
//! surface in the report's skipped-rules metadata.

use super::{Hit, RuleOutcome, Skip};
use crate::html::{DomTree, NodeId};

const MIN_RATIO: f64 = 4.5;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Color {
    Rgb(u8, u8, u8),
    Transparent,
}

/// sRGB channel to linear light.
fn srgb_to_linear(channel: u8) -> f64 {
    let v = channel as f64 / 255.0;
    if v <= 0.04045 {
        v / 12.92
    } else {
        ((v + 0.055) / 1.055).powf(2.4)
    }
}

/// WCAG relative luminance.
fn relative_luminance(r: u8, g: u8, b: u8) -> f64 {
    0.2126 * srgb_to_linear(r) + 0.7152 * srgb_to_linear(g) + 0.0722 * srgb_to_linear(b)
}

/// WCAG contrast ratio, symmetric in its arguments.
pub fn contrast_ratio(fg: (u8, u8, u8), bg: (u8, u8, u8)) -> f64 {
    let l1 = relative_luminance(fg.0, fg.1, fg.2);
    let l2 = relative_luminance(bg.0, bg.1, bg.2);
    let (lighter, darker) = if l1 > l2 { (l1, l2) } else { (l2, l1) };
    (lighter + 0.05) / (darker + 0.05)
}

fn named_color(name: &str) -> Option<Color> {
    let rgb = match name {
        "black" => (0, 0, 0),
        "silver" => (192, 192, 192),
        "gray" | "grey" => (128, 128, 128),
        "white" => (255, 255, 255),
        "maroon" => (128, 0, 0),
        "red" => (255, 0, 0),
        "purple" => (128, 0, 128),
        "fuchsia" | "magenta" => (255, 0, 255),
        "green" => (0, 128, 0),
        "lime" => (0, 255, 0),
        "olive" => (128, 128, 0),
        "yellow" => (255, 255, 0),
        "navy" => (0, 0, 128),
        "blue" => (0, 0, 255),
        "teal" => (0, 128, 128),
        "aqua" | "cyan" => (0, 255, 255),
        "orange" => (255, 165, 0),
        "transparent" => return Some(Color::Transparent),
        _ => return None,
    };
    Some(Color::Rgb(rgb.0, rgb.1, rgb.2))
}

/// Parse a CSS color value; `None` when not statically resolvable.
fn parse_color(value: &str) -> Option<Color> {
    let v = value.trim().to_ascii_lowercase();
    if let Some(hex) = v.strip_prefix('#') {
        let digits: Vec<u8> = hex
            .chars()
            .map(|c| c.to_digit(16).map(|d| d as u8))
            .collect::<Option<_>>()?;
        return match digits.len() {
            3 => Some(Color::Rgb(digits[0] * 17, digits[1] * 17, digits[2] * 17)),
            6 => Some(Color::Rgb(
                digits[0] * 16 + digits[1],
                digits[2] * 16 + digits[3],
                digits[4] * 16 + digits[5],
            )),
            8 if digits[6] == 15 && digits[7] == 15 => Some(Color::Rgb(
                digits[0] * 16 + digits[1],
                digits[2] * 16 + digits[3],
                digits[4] * 16 + digits[5],
            )),
            _ => None,
        };
    }
    if let Some(args) = v
        .strip_prefix("rgba(")
        .or_else(|| v.strip_prefix("rgb("))
        .and_then(|s| s.strip_suffix(')'))
    {
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        if parts.len() < 3 {
            return None;
        }
        if parts.len() == 4 {
            let alpha: f64 = parts[3].parse().ok()?;
            if alpha < 1.0 {
                return None; // compositing needed
            }
        }
        let mut ch = [0u8; 3];
        for (i, p) in parts.iter().take(3).enumerate() {
            ch[i] = if let Some(pct) = p.strip_suffix('%') {
                let f: f64 = pct.trim().parse().ok()?;
                (f.clamp(0.0, 100.0) * 255.0 / 100.0).round() as u8
            } else {
                p.parse::<f64>().ok()?.clamp(0.0, 255.0).round() as u8
            };
        }
        return Some(Color::Rgb(ch[0], ch[1], ch[2]));
    }
    named_color(&v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Specificity {
    Tag,
    Class,
    Id,
}

struct StyleRule {
    selector_kind: Specificity,
    selector: String,
    property: String, // "color" or "background"
    value: String,
}

/// Flat stylesheet: `tag`, `#id` and `.class` selectors only.
fn parse_stylesheets(doc: &DomTree) -> Vec<StyleRule> {
    let mut rules = Vec::new();
    for id in doc.elements() {
        if doc.tag(id) != Some("style") {
            continue;
        }
        let css = doc.direct_text(id);
        for block in css.split('}') {
            let Some((selectors, body)) = block.split_once('{') else {
                continue;
            };
            let decls: Vec<(String, String)> = body
                .split(';')
                .filter_map(|d| d.split_once(':'))
                .map(|(p, v)| (p.trim().to_ascii_lowercase(), v.trim().to_string()))
                .collect();
            for sel in selectors.split(',') {
                let sel = sel.trim();
                let (kind, name) = if let Some(idsel) = sel.strip_prefix('#') {
                    (Specificity::Id, idsel)
                } else if let Some(class) = sel.strip_prefix('.') {
                    (Specificity::Class, class)
                } else if !sel.is_empty()
                    && sel.chars().all(|c| c.is_ascii_alphanumeric() || c == '-')
                {
                    (Specificity::Tag, sel)
                } else {
                    continue; // combinators/pseudo-classes are out of scope
                };
                for (prop, value) in &decls {
                    let prop = match prop.as_str() {
                        "color" => "color",
                        "background" | "background-color" => "background",
                        _ => continue,
                    };
                    rules.push(StyleRule {
                        selector_kind: kind,
                        selector: name.to_ascii_lowercase(),
                        property: prop.to_string(),
                        value: value.clone(),
                    });
                }
            }
        }
    }
    rules
}

fn inline_decl(doc: &DomTree, id: NodeId, wanted: &str) -> Option<String> {
    let style = doc.attr(id, "style")?;
    let mut found = None;
    for decl in style.split(';') {
        let Some((prop, value)) = decl.split_once(':') else {
            continue;
        };
        let prop = prop.trim().to_ascii_lowercase();
        let is_match = match wanted {
            "color" => prop == "color",
            "background" => prop == "background" || prop == "background-color",
            _ => false,
        };
        if is_match {
            found = Some(value.trim().to_string()); // last declaration wins
        }
    }
    found
}

fn matches_selector(doc: &DomTree, id: NodeId, rule: &StyleRule) -> bool {
    match rule.selector_kind {
        Specificity::Tag => doc.tag(id) == Some(rule.selector.as_str()),
        Specificity::Id => doc
            .attr(id, "id")
            .map(|v| v.eq_ignore_ascii_case(&rule.selector))
            .unwrap_or(false),
        Specificity::Class => doc
            .attr(id, "class")
            .map(|v| {
                v.split_whitespace()
                    .any(|c| c.eq_ignore_ascii_case(&rule.selector))
            })
            .unwrap_or(false),
    }
}

/// Declared value for an element: inline wins, then highest-specificity
/// stylesheet match (later rules win ties).
fn declared_value(
    doc: &DomTree,
    sheet: &[StyleRule],
    id: NodeId,
    property: &str,
) -> Option<String> {
    if let Some(v) = inline_decl(doc, id, property) {
        return Some(v);
    }
    let mut best: Option<(Specificity, usize, &str)> = None;
    for (i, rule) in sheet.iter().enumerate() {
        if rule.property != property || !matches_selector(doc, id, rule) {
            continue;
        }
        let candidate = (rule.selector_kind, i, rule.value.as_str());
        best = Some(match best {
            Some(b) if (b.0, b.1) > (candidate.0, candidate.1) => b,
            _ => candidate,
        });
    }
    best.map(|(_, _, v)| v.to_string())
}

/// Background: own declaration, else nearest ancestor with an explicit one.
fn resolved_background(doc: &DomTree, sheet: &[StyleRule], id: NodeId) -> Option<(NodeId, String)> {
    let mut cur = Some(id);
    while let Some(n) = cur {
        if doc.is_element(n) {
            if let Some(v) = declared_value(doc, sheet, n, "background") {
                return Some((n, v));
            }
        }
        cur = doc.parent(n);
    }
    None
}

pub(super) fn check_color_contrast(doc: &DomTree) -> RuleOutcome {
    let mut out = RuleOutcome::default();
    let sheet = parse_stylesheets(doc);

    for id in doc.elements() {
        if matches!(doc.tag(id), Some("script" | "style" | "template")) {
            continue;
        }
        if doc.direct_text(id).trim().is_empty() {
            continue;
        }
        let fg_decl = declared_value(doc, &sheet, id, "color");
        let bg_decl = resolved_background(doc, &sheet, id);
        match (fg_decl, bg_decl) {
            (None, None) => {} // unstyled text: nothing to evaluate
            (Some(_), None) => out.skipped.push(Skip {
                reason: "text color declared but no resolvable background".into(),
            }),
            (None, Some(_)) => out.skipped.push(Skip {
                reason: "background declared but no resolvable text color".into(),
            }),
            (Some(fg), Some((_, bg))) => match (parse_color(&fg), parse_color(&bg)) {
                (Some(Color::Rgb(fr, fg_, fb)), Some(Color::Rgb(br, bg_, bb))) => {
                    let ratio = contrast_ratio((fr, fg_, fb), (br, bg_, bb));
                    if ratio < MIN_RATIO {
                        out.hits.push(Hit {
                            node: id,
                            message: format!(
                                "contrast ratio {ratio:.2} between {fg} and {bg} is below {MIN_RATIO}"
                            ),
                        });
                    }
                }
                _ => out.skipped.push(Skip {
                    reason: format!("color pair not statically resolvable: {fg} / {bg}"),
                }),
            },
        }
    }
    out
}
