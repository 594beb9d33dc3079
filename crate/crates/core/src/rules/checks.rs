//! Static check functions, one per catalog rule (contrast lives in its
//! own module). All checks are pure and report hits in document order.

use std::collections::{HashMap, HashSet};

use super::{Hit, RuleOutcome};
use crate::html::{DomTree, NodeId};

/// Focusable elements, fixed definition: `a[href]`, `button`, `input`,
/// `select`, `textarea`, or any element with `tabindex >= 0`.
fn is_focusable(doc: &DomTree, id: NodeId) -> bool {
    if let Some(ti) = doc.attr(id, "tabindex") {
        if ti.trim().parse::<i32>().map(|n| n >= 0).unwrap_or(false) {
            return true;
        }
    }
    match doc.tag(id) {
        Some("a") => doc.attr(id, "href").is_some(),
        Some("button" | "input" | "select" | "textarea") => true,
        _ => false,
    }
}

/// Accessible-name approximation: aria-label, else subtree text, else
/// descendant image alt text, else title.
fn accessible_text(doc: &DomTree, id: NodeId) -> String {
    if let Some(label) = doc.attr(id, "aria-label") {
        if !label.trim().is_empty() {
            return label.trim().to_string();
        }
    }
    let text = doc.text_content(id);
    if !text.trim().is_empty() {
        return text.trim().to_string();
    }
    for n in doc.descendants(id) {
        if doc.tag(n) == Some("img") {
            if let Some(alt) = doc.attr(n, "alt") {
                if !alt.trim().is_empty() {
                    return alt.trim().to_string();
                }
            }
        }
    }
    doc.attr(id, "title")
        .map(|t| t.trim().to_string())
        .unwrap_or_default()
}

fn heading_level(tag: &str) -> Option<u8> {
    match tag {
        "h1" => Some(1),
        "h2" => Some(2),
        "h3" => Some(3),
        "h4" => Some(4),
        "h5" => Some(5),
        "h6" => Some(6),
        _ => None,
    }
}

const LANDMARK_ROLES: &[&str] = &[
    "main",
    "navigation",
    "banner",
    "contentinfo",
    "complementary",
    "search",
];

fn has_name(doc: &DomTree, id: NodeId) -> bool {
    doc.attr(id, "aria-label")
        .map(|v| !v.trim().is_empty())
        .unwrap_or(false)
        || doc
            .attr(id, "aria-labelledby")
            .map(|v| !v.trim().is_empty())
            .unwrap_or(false)
}

fn is_landmark(doc: &DomTree, id: NodeId) -> bool {
    if let Some(role) = doc.attr(id, "role") {
        let role = role.trim().to_ascii_lowercase();
        if LANDMARK_ROLES.contains(&role.as_str()) {
            return true;
        }
        if role == "region" && has_name(doc, id) {
            return true;
        }
    }
    match doc.tag(id) {
        Some("main" | "nav" | "header" | "footer" | "aside") => true,
        Some("section") => has_name(doc, id),
        _ => false,
    }
}

/// Landmark role implied by the tag, for uniqueness grouping.
fn landmark_role(doc: &DomTree, id: NodeId) -> Option<String> {
    if let Some(role) = doc.attr(id, "role") {
        let role = role.trim().to_ascii_lowercase();
        if LANDMARK_ROLES.contains(&role.as_str()) || role == "region" {
            return Some(role);
        }
    }
    match doc.tag(id)? {
        "main" => Some("main".into()),
        "nav" => Some("navigation".into()),
        "header" => Some("banner".into()),
        "footer" => Some("contentinfo".into()),
        "aside" => Some("complementary".into()),
        "section" if has_name(doc, id) => Some("region".into()),
        _ => None,
    }
}

/// Flags every `img` lacking a non-empty `alt`; `role="presentation"`
/// exempts.
pub(super) fn check_image_alt(doc: &DomTree) -> RuleOutcome {
    let mut out = RuleOutcome::default();
    for id in doc.elements() {
        if doc.tag(id) != Some("img") {
            continue;
        }
        if doc
            .attr(id, "role")
            .map(|r| r.eq_ignore_ascii_case("presentation"))
            .unwrap_or(false)
        {
            continue;
        }
        match doc.attr(id, "alt") {
            Some(alt) if !alt.trim().is_empty() => {}
            Some(_) => out.hits.push(Hit {
                node: id,
                message: "img has an empty alt attribute".into(),
            }),
            None => out.hits.push(Hit {
                node: id,
                message: "img has no alt attribute".into(),
            }),
        }
    }
    out
}

/// Links (`a[href]`) must have a discernible name.
pub(super) fn check_link_name(doc: &DomTree) -> RuleOutcome {
    let mut out = RuleOutcome::default();
    for id in doc.elements() {
        if doc.tag(id) == Some("a")
            && doc.attr(id, "href").is_some()
            && accessible_text(doc, id).is_empty()
        {
            out.hits.push(Hit {
                node: id,
                message: "link has no discernible text".into(),
            });
        }
    }
    out
}

/// `button` elements, `role="button"` elements, and `input[type=button]`
/// must have a discernible name. Submit/reset inputs have implicit names.
pub(super) fn check_button_name(doc: &DomTree) -> RuleOutcome {
    let mut out = RuleOutcome::default();
    for id in doc.elements() {
        let is_button = doc.tag(id) == Some("button")
            || doc
                .attr(id, "role")
                .map(|r| r.trim().eq_ignore_ascii_case("button"))
                .unwrap_or(false);
        if is_button {
            let named = !accessible_text(doc, id).is_empty()
                || doc
                    .attr(id, "value")
                    .map(|v| !v.trim().is_empty())
                    .unwrap_or(false);
            if !named {
                out.hits.push(Hit {
                    node: id,
                    message: "button has no discernible text".into(),
                });
            }
        } else if doc.tag(id) == Some("input")
            && doc
                .attr(id, "type")
                .map(|t| t.eq_ignore_ascii_case("button"))
                .unwrap_or(false)
        {
            let named = doc
                .attr(id, "value")
                .map(|v| !v.trim().is_empty())
                .unwrap_or(false)
                || !accessible_text(doc, id).is_empty();
            if !named {
                out.hits.push(Hit {
                    node: id,
                    message: "input button has no discernible text".into(),
                });
            }
        }
    }
    out
}

/// Flags a heading whose level increases by more than one from the
/// previous heading in document order. The first heading never flags.
pub(super) fn check_heading_order(doc: &DomTree) -> RuleOutcome {
    let mut out = RuleOutcome::default();
    let mut prev: Option<u8> = None;
    for id in doc.elements() {
        let Some(level) = doc.tag(id).and_then(heading_level) else {
            continue;
        };
        if let Some(p) = prev {
            if level > p + 1 {
                out.hits.push(Hit {
                    node: id,
                    message: format!("heading level jumps from h{p} to h{level}"),
                });
            }
        }
        prev = Some(level);
    }
    out
}

/// Headings must have discernible text.
pub(super) fn check_empty_heading(doc: &DomTree) -> RuleOutcome {
    let mut out = RuleOutcome::default();
    for id in doc.elements() {
        if doc.tag(id).and_then(heading_level).is_some() && accessible_text(doc, id).is_empty() {
            out.hits.push(Hit {
                node: id,
                message: "heading has no discernible text".into(),
            });
        }
    }
    out
}

/// Flags second-and-later occurrences of each id value.
pub(super) fn check_duplicate_id(doc: &DomTree) -> RuleOutcome {
    let mut out = RuleOutcome::default();
    let mut seen: HashSet<&str> = HashSet::new();
    for id in doc.elements() {
        let Some(value) = doc.attr(id, "id") else {
            continue;
        };
        if value.is_empty() {
            continue;
        }
        if !seen.insert(value) {
            out.hits.push(Hit {
                node: id,
                message: format!("duplicate id value \"{value}\""),
            });
        }
    }
    out
}

/// `aria-hidden="true"` elements must not contain focusable descendants.
pub(super) fn check_aria_hidden_focus(doc: &DomTree) -> RuleOutcome {
    let mut out = RuleOutcome::default();
    for id in doc.elements() {
        let hidden = doc
            .attr(id, "aria-hidden")
            .map(|v| v.trim().eq_ignore_ascii_case("true"))
            .unwrap_or(false);
        if !hidden {
            continue;
        }
        let focusable_inside = doc
            .descendants(id)
            .skip(1)
            .any(|n| doc.is_element(n) && is_focusable(doc, n));
        if focusable_inside {
            out.hits.push(Hit {
                node: id,
                message: "aria-hidden element contains focusable descendants".into(),
            });
        }
    }
    out
}

/// `li` must live in a `ul`/`ol`/`menu` or an element with `role="list"`.
pub(super) fn check_listitem(doc: &DomTree) -> RuleOutcome {
    let mut out = RuleOutcome::default();
    for id in doc.elements() {
        if doc.tag(id) != Some("li") {
            continue;
        }
        let ok = doc
            .parent(id)
            .map(|p| {
                matches!(doc.tag(p), Some("ul" | "ol" | "menu"))
                    || doc
                        .attr(p, "role")
                        .map(|r| r.trim().eq_ignore_ascii_case("list"))
                        .unwrap_or(false)
            })
            .unwrap_or(false);
        if !ok {
            out.hits.push(Hit {
                node: id,
                message: "li is not contained in a list".into(),
            });
        }
    }
    out
}

/// Content-model violations representable in a parsed tree: non-`li`
/// element children of lists, and nested interactive elements.
pub(super) fn check_invalid_nesting(doc: &DomTree) -> RuleOutcome {
    let mut out = RuleOutcome::default();
    for id in doc.elements() {
        match doc.tag(id) {
            Some("ul" | "ol") => {
                for &c in doc.children(id) {
                    if let Some(tag) = doc.tag(c) {
                        if !matches!(tag, "li" | "script" | "template") {
                            out.hits.push(Hit {
                                node: c,
                                message: format!("{tag} is not allowed as a list child"),
                            });
                        }
                    }
                }
            }
            Some("a") if doc.attr(id, "href").is_some() => {
                if let Some(inner) = nested_interactive(doc, id) {
                    out.hits.push(Hit {
                        node: id,
                        message: format!(
                            "interactive {} nested inside a link",
                            doc.tag(inner).unwrap_or("element")
                        ),
                    });
                }
            }
            Some("button") => {
                if let Some(inner) = nested_interactive(doc, id) {
                    out.hits.push(Hit {
                        node: id,
                        message: format!(
                            "interactive {} nested inside a button",
                            doc.tag(inner).unwrap_or("element")
                        ),
                    });
                }
            }
            _ => {}
        }
    }
    out
}

fn nested_interactive(doc: &DomTree, id: NodeId) -> Option<NodeId> {
    doc.descendants(id)
        .skip(1)
        .find(|&n| doc.is_element(n) && is_focusable(doc, n))
}

/// Form fields need a label: wrapping `label`, `label[for]`, aria-label,
/// aria-labelledby, or title.
pub(super) fn check_label(doc: &DomTree) -> RuleOutcome {
    let mut out = RuleOutcome::default();
    let label_for: HashSet<&str> = doc
        .elements()
        .into_iter()
        .filter(|&n| doc.tag(n) == Some("label"))
        .filter_map(|n| doc.attr(n, "for"))
        .filter(|v| !v.is_empty())
        .collect();
    for id in doc.elements() {
        let needs_label = match doc.tag(id) {
            Some("select" | "textarea") => true,
            Some("input") => {
                let ty = doc.attr(id, "type").unwrap_or("text").to_ascii_lowercase();
                !matches!(
                    ty.as_str(),
                    "hidden" | "submit" | "reset" | "button" | "image"
                )
            }
            _ => false,
        };
        if !needs_label {
            continue;
        }
        let labelled = has_name(doc, id)
            || doc
                .attr(id, "title")
                .map(|t| !t.trim().is_empty())
                .unwrap_or(false)
            || doc
                .attr(id, "id")
                .map(|i| label_for.contains(i))
                .unwrap_or(false)
            || inside_label(doc, id);
        if !labelled {
            out.hits.push(Hit {
                node: id,
                message: "form element has no label".into(),
            });
        }
    }
    out
}

fn inside_label(doc: &DomTree, id: NodeId) -> bool {
    let mut cur = doc.parent(id);
    while let Some(p) = cur {
        if doc.tag(p) == Some("label") {
            return true;
        }
        cur = doc.parent(p);
    }
    false
}

/// Rendered-text-bearing content outside landmarks, flagged once per
/// top-level offender. Head content and script-like subtrees are ignored.
pub(super) fn check_region(doc: &DomTree) -> RuleOutcome {
    let mut out = RuleOutcome::default();
    let Some(body) = doc.body() else {
        return out;
    };
    fn walk(doc: &DomTree, id: NodeId, out: &mut RuleOutcome) {
        if is_landmark(doc, id) {
            return;
        }
        if matches!(
            doc.tag(id),
            Some("script" | "style" | "template" | "noscript")
        ) {
            return;
        }
        if !doc.direct_text(id).trim().is_empty() {
            out.hits.push(Hit {
                node: id,
                message: "content is not contained by a landmark".into(),
            });
            return; // one hit per top-level offender
        }
        for &c in doc.children(id) {
            if doc.is_element(c) {
                walk(doc, c, out);
            }
        }
    }
    for &c in doc.children(body) {
        if doc.is_element(c) {
            walk(doc, c, &mut out);
        }
    }
    out
}

/// Landmarks with the same role must have distinct accessible names.
pub(super) fn check_landmark_unique(doc: &DomTree) -> RuleOutcome {
    let mut out = RuleOutcome::default();
    let mut seen: HashMap<(String, String), NodeId> = HashMap::new();
    for id in doc.elements() {
        let Some(role) = landmark_role(doc, id) else {
            continue;
        };
        let name = doc
            .attr(id, "aria-label")
            .or_else(|| doc.attr(id, "aria-labelledby"))
            .unwrap_or("")
            .trim()
            .to_ascii_lowercase();
        if seen.insert((role.clone(), name), id).is_some() {
            out.hits.push(Hit {
                node: id,
                message: format!("landmark role \"{role}\" is not unique"),
            });
        }
    }
    out
}

/// `role="presentation"`/`"none"` conflicts with focusability, global
/// ARIA attributes, or an explicit tabindex.
pub(super) fn check_presentation_role_conflict(doc: &DomTree) -> RuleOutcome {
    let mut out = RuleOutcome::default();
    for id in doc.elements() {
        let presentational = doc
            .attr(id, "role")
            .map(|r| {
                let r = r.trim().to_ascii_lowercase();
                r == "presentation" || r == "none"
            })
            .unwrap_or(false);
        if !presentational {
            continue;
        }
        let has_global_aria = doc.attrs(id).iter().any(|(n, _)| n.starts_with("aria-"));
        if has_global_aria || is_focusable(doc, id) || doc.attr(id, "tabindex").is_some() {
            out.hits.push(Hit {
                node: id,
                message: "presentation role conflicts with ARIA or focus behaviour".into(),
            });
        }
    }
    out
}

/// Valid non-abstract WAI-ARIA roles.
const VALID_ROLES: &[&str] = &[
    "alert",
    "alertdialog",
    "application",
    "article",
    "banner",
    "blockquote",
    "button",
    "caption",
    "cell",
    "checkbox",
    "code",
    "columnheader",
    "combobox",
    "complementary",
    "contentinfo",
    "definition",
    "deletion",
    "dialog",
    "directory",
    "doc-backlink",
    "doc-biblioref",
    "doc-glossref",
    "doc-noteref",
    "document",
    "emphasis",
    "feed",
    "figure",
    "form",
    "generic",
    "grid",
    "gridcell",
    "group",
    "heading",
    "img",
    "insertion",
    "link",
    "list",
    "listbox",
    "listitem",
    "log",
    "main",
    "marquee",
    "math",
    "menu",
    "menubar",
    "menuitem",
    "menuitemcheckbox",
    "menuitemradio",
    "meter",
    "navigation",
    "none",
    "note",
    "option",
    "paragraph",
    "presentation",
    "progressbar",
    "radio",
    "radiogroup",
    "region",
    "row",
    "rowgroup",
    "rowheader",
    "scrollbar",
    "search",
    "searchbox",
    "separator",
    "slider",
    "spinbutton",
    "status",
    "strong",
    "subscript",
    "superscript",
    "switch",
    "tab",
    "table",
    "tablist",
    "tabpanel",
    "term",
    "textbox",
    "time",
    "timer",
    "toolbar",
    "tooltip",
    "tree",
    "treegrid",
    "treeitem",
];

/// Allowed explicit roles for elements with strong native semantics.
/// Elements not listed accept any valid role.
fn allowed_roles(doc: &DomTree, id: NodeId) -> Option<&'static [&'static str]> {
    match doc.tag(id)? {
        "a" if doc.attr(id, "href").is_some() => Some(&[
            "button",
            "checkbox",
            "doc-backlink",
            "doc-biblioref",
            "doc-glossref",
            "doc-noteref",
            "link",
            "menuitem",
            "menuitemcheckbox",
            "menuitemradio",
            "option",
            "radio",
            "switch",
            "tab",
            "treeitem",
        ]),
        "button" => Some(&[
            "button",
            "checkbox",
            "combobox",
            "gridcell",
            "link",
            "menuitem",
            "menuitemcheckbox",
            "menuitemradio",
            "option",
            "radio",
            "separator",
            "slider",
            "switch",
            "tab",
            "treeitem",
        ]),
        "ul" | "ol" => Some(&[
            "directory",
            "group",
            "list",
            "listbox",
            "menu",
            "menubar",
            "none",
            "presentation",
            "radiogroup",
            "tablist",
            "toolbar",
            "tree",
        ]),
        "li" => Some(&[
            "listitem",
            "menuitem",
            "menuitemcheckbox",
            "menuitemradio",
            "none",
            "option",
            "presentation",
            "radio",
            "separator",
            "tab",
            "treeitem",
        ]),
        "h1" | "h2" | "h3" | "h4" | "h5" | "h6" => {
            Some(&["heading", "none", "presentation", "tab"])
        }
        "select" => Some(&["combobox", "listbox", "menu"]),
        "textarea" => Some(&["textbox"]),
        "nav" => Some(&[
            "menu",
            "menubar",
            "navigation",
            "none",
            "presentation",
            "tablist",
        ]),
        "main" => Some(&["main", "none", "presentation"]),
        _ => None,
    }
}

/// Role values must be valid ARIA roles and appropriate for the element.
pub(super) fn check_aria_allowed_role(doc: &DomTree) -> RuleOutcome {
    let mut out = RuleOutcome::default();
    for id in doc.elements() {
        let Some(role_attr) = doc.attr(id, "role") else {
            continue;
        };
        let tokens: Vec<String> = role_attr
            .split_whitespace()
            .map(|t| t.to_ascii_lowercase())
            .collect();
        if tokens.is_empty() {
            continue;
        }
        let mut flagged = false;
        for t in &tokens {
            if !VALID_ROLES.contains(&t.as_str()) {
                out.hits.push(Hit {
                    node: id,
                    message: format!("\"{t}\" is not a valid ARIA role"),
                });
                flagged = true;
                break;
            }
        }
        if flagged {
            continue;
        }
        if let Some(allowed) = allowed_roles(doc, id) {
            let role = tokens[0].as_str();
            if !allowed.contains(&role) {
                out.hits.push(Hit {
                    node: id,
                    message: format!(
                        "role \"{role}\" is not allowed on {}",
                        doc.tag(id).unwrap_or("element")
                    ),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::html::parse_html;

    fn hits(check: fn(&DomTree) -> RuleOutcome, html: &str) -> usize {
        check(&parse_html(html).unwrap()).hits.len()
    }

    #[test]
    fn image_alt_cases() {
        assert_eq!(hits(check_image_alt, "<img src=a.png>"), 1);
        assert_eq!(hits(check_image_alt, "<img src=a.png alt=\"\">"), 1);
        assert_eq!(hits(check_image_alt, "<img alt=\"Product image\">"), 0);
        assert_eq!(
            hits(check_image_alt, "<img src=a.png role=\"presentation\">"),
            0
        );
    }

    #[test]
    fn heading_order_cases() {
        assert_eq!(hits(check_heading_order, "<h1>a</h1><h3>b</h3>"), 1);
        assert_eq!(hits(check_heading_order, "<h1>a</h1><h2>b</h2>"), 0);
        // first heading never flags, downward jumps are fine
        assert_eq!(hits(check_heading_order, "<h3>a</h3><h1>b</h1>"), 0);
    }

    #[test]
    fn aria_hidden_focus_cases() {
        assert_eq!(
            hits(
                check_aria_hidden_focus,
                "<div aria-hidden=\"true\"><button>x</button></div>"
            ),
            1
        );
        assert_eq!(
            hits(
                check_aria_hidden_focus,
                "<div aria-hidden=\"true\"><span tabindex=\"2\">x</span></div>"
            ),
            1
        );
        assert_eq!(
            hits(
                check_aria_hidden_focus,
                "<div aria-hidden=\"true\"><span>x</span><a>no href</a></div>"
            ),
            0
        );
    }

    #[test]
    fn link_and_button_name_cases() {
        assert_eq!(hits(check_link_name, "<a href=\"/x\"></a>"), 1);
        assert_eq!(hits(check_link_name, "<a href=\"/x\">go</a>"), 0);
        assert_eq!(
            hits(check_link_name, "<a href=\"/x\"><img alt=\"pic\"></a>"),
            0
        );
        assert_eq!(hits(check_link_name, "<a></a>"), 0); // no href, no link
        assert_eq!(hits(check_button_name, "<button></button>"), 1);
        assert_eq!(
            hits(check_button_name, "<button aria-label=\"Close\"></button>"),
            0
        );
        assert_eq!(hits(check_button_name, "<input type=button>"), 1);
        assert_eq!(hits(check_button_name, "<input type=button value=Go>"), 0);
        assert_eq!(hits(check_button_name, "<input type=submit>"), 0);
    }

    #[test]
    fn region_flags_topmost_offender_once() {
        let doc = parse_html("<div><p>one</p><p>two</p></div>").unwrap();
        let out = check_region(&doc);
        assert_eq!(out.hits.len(), 2); // two sibling text-bearing paragraphs
        let doc = parse_html("<div>direct text<p>nested</p></div>").unwrap();
        assert_eq!(check_region(&doc).hits.len(), 1); // div is the offender
        let doc = parse_html("<main><p>fine</p></main>").unwrap();
        assert_eq!(check_region(&doc).hits.len(), 0);
        let doc = parse_html("<div role=\"main\"><p>fine</p></div>").unwrap();
        assert_eq!(check_region(&doc).hits.len(), 0);
    }

    #[test]
    fn landmark_unique_cases() {
        assert_eq!(
            hits(
                check_landmark_unique,
                "<nav aria-label=\"m\">a</nav><nav aria-label=\"m\">b</nav>"
            ),
            1
        );
        assert_eq!(
            hits(
                check_landmark_unique,
                "<nav aria-label=\"a\">a</nav><nav aria-label=\"b\">b</nav>"
            ),
            0
        );
    }

    #[test]
    fn listitem_and_nesting_cases() {
        assert_eq!(hits(check_listitem, "<div><li>x</li></div>"), 1);
        assert_eq!(hits(check_listitem, "<ul><li>x</li></ul>"), 0);
        assert_eq!(
            hits(check_listitem, "<div role=\"list\"><li>x</li></div>"),
            0
        );
        assert_eq!(hits(check_invalid_nesting, "<ul><div>x</div></ul>"), 1);
        assert_eq!(hits(check_invalid_nesting, "<ul><li>x</li></ul>"), 0);
        assert_eq!(
            hits(
                check_invalid_nesting,
                "<a href=\"/\"><button>b</button></a>"
            ),
            1
        );
    }

    #[test]
    fn label_cases() {
        assert_eq!(hits(check_label, "<input type=text>"), 1);
        assert_eq!(
            hits(check_label, "<label for=\"n\">N</label><input id=\"n\">"),
            0
        );
        assert_eq!(hits(check_label, "<label>N<input></label>"), 0);
        assert_eq!(hits(check_label, "<input aria-label=\"name\">"), 0);
        assert_eq!(hits(check_label, "<input type=hidden>"), 0);
        assert_eq!(hits(check_label, "<select></select>"), 1);
    }

    #[test]
    fn aria_allowed_role_cases() {
        assert_eq!(
            hits(
                check_aria_allowed_role,
                "<ul role=\"button\"><li>x</li></ul>"
            ),
            1
        );
        assert_eq!(
            hits(check_aria_allowed_role, "<ul role=\"menu\"><li>x</li></ul>"),
            0
        );
        assert_eq!(
            hits(check_aria_allowed_role, "<div role=\"bogus\">x</div>"),
            1
        );
        assert_eq!(
            hits(
                check_aria_allowed_role,
                "<button role=\"switch\">x</button>"
            ),
            0
        );
        assert_eq!(
            hits(check_aria_allowed_role, "<h2 role=\"banner\">x</h2>"),
            1
        );
    }

    #[test]
    fn presentation_conflict_cases() {
        assert_eq!(
            hits(
                check_presentation_role_conflict,
                "<button role=\"presentation\">x</button>"
            ),
            1
        );
        assert_eq!(
            hits(
                check_presentation_role_conflict,
                "<div role=\"none\" aria-live=\"polite\">x</div>"
            ),
            1
        );
        assert_eq!(
            hits(
                check_presentation_role_conflict,
                "<img role=\"presentation\" src=d.png>"
            ),
            0
        );
    }

    #[test]
    fn duplicate_id_flags_second_and_later() {
        let doc =
            parse_html("<div id=\"a\"></div><div id=\"a\"></div><div id=\"a\"></div>").unwrap();
        assert_eq!(check_duplicate_id(&doc).hits.len(), 2);
    }
}
