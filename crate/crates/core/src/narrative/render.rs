use std::collections::BTreeMap;
use std::sync::Arc;

use super::templates::EN;
use super::NarrativeDoc;

pub trait NarrativeRenderer: Send + Sync {
    /// Registry key; also the output file extension.
    fn name(&self) -> &'static str;
    fn render(&self, doc: &NarrativeDoc) -> String;
}

/// Renderers by name.
#[derive(Clone, Default)]
pub struct RendererRegistry {
    renderers: BTreeMap<&'static str, Arc<dyn NarrativeRenderer>>,
}

impl RendererRegistry {
    pub fn with_defaults() -> Self {
        let mut r = RendererRegistry::default();
        r.register(Arc::new(PlainTextRenderer));
        r.register(Arc::new(MarkdownRenderer));
        r.register(Arc::new(HtmlRenderer));
        r
    }

    pub fn register(&mut self, renderer: Arc<dyn NarrativeRenderer>) {
        self.renderers.insert(renderer.name(), renderer);
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn NarrativeRenderer>> {
        self.renderers.get(name).cloned()
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.renderers.keys().copied().collect()
    }
}

pub struct PlainTextRenderer;

impl NarrativeRenderer for PlainTextRenderer {
    fn name(&self) -> &'static str {
        "txt"
    }

    fn render(&self, doc: &NarrativeDoc) -> String {
        let mut out = String::new();
        let underline = |out: &mut String, text: &str, c: char| {
            out.push_str(text);
            out.push('\n');
            out.extend(std::iter::repeat_n(c, text.chars().count()));
            out.push('\n');
        };
        underline(&mut out, &doc.title, '=');
        out.push('\n');
        out.push_str(&doc.summary.to_string());
        for s in &doc.sections {
            out.push('\n');
            underline(&mut out, &s.heading, '-');
            for line in &s.sentences {
                out.push_str(line);
                out.push('\n');
            }
        }
        out
    }
}

pub struct MarkdownRenderer;

impl NarrativeRenderer for MarkdownRenderer {
    fn name(&self) -> &'static str {
        "md"
    }

    fn render(&self, doc: &NarrativeDoc) -> String {
        let mut out = format!("# {}\n\n## {}\n\n", doc.title, EN.summary_heading);
        for (name, value) in doc.summary.fields() {
            out.push_str(&format!("- `{name}`: {value}\n"));
        }
        for s in &doc.sections {
            out.push_str(&format!("\n## {}\n", s.heading));
            if !s.sentences.is_empty() {
                out.push('\n');
            }
            for line in &s.sentences {
                out.push_str("- ");
                out.push_str(&md_escape(line));
                out.push('\n');
            }
        }
        out
    }
}

fn md_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        if matches!(c, '\\' | '*' | '_' | '`' | '[' | ']' | '<' | '>' | '#') {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

/// A single HTML file with inline styles.
pub struct HtmlRenderer;

impl NarrativeRenderer for HtmlRenderer {
    fn name(&self) -> &'static str {
        "html"
    }

    fn render(&self, doc: &NarrativeDoc) -> String {
        let title = html_escape(&doc.title);
        let mut out = String::new();
        out.push_str("<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n");
        out.push_str(&format!("<title>{title}</title>\n"));
        out.push_str(
            "<style>\nbody { font-family: sans-serif; max-width: 50em; margin: 2em auto; line-height: 1.4; }\n\
             table { border-collapse: collapse; }\ntd { padding: 0.1em 1em 0.1em 0; }\n\
             section.problems li { color: #a00; }\n</style>\n",
        );
        out.push_str("</head>\n<body>\n");
        out.push_str(&format!("<h1>{title}</h1>\n<h2>{}</h2>\n<table>\n", EN.summary_heading));
        for (name, value) in doc.summary.fields() {
            out.push_str(&format!("<tr><td>{name}</td><td>{value}</td></tr>\n"));
        }
        out.push_str("</table>\n");
        for s in &doc.sections {
            let class = s.heading.to_lowercase();
            out.push_str(&format!(
                "<section class=\"{class}\">\n<h2>{}</h2>\n",
                html_escape(&s.heading)
            ));
            if !s.sentences.is_empty() {
                out.push_str("<ul>\n");
                for line in &s.sentences {
                    out.push_str(&format!("<li>{}</li>\n", html_escape(line)));
                }
                out.push_str("</ul>\n");
            }
            out.push_str("</section>\n");
        }
        out.push_str("</body>\n</html>\n");
        out
    }
}

fn html_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
