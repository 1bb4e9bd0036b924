//! Output artifacts: the tab-separated dataset format, report files, and the
//! classification record stream. Every file starts with a provenance header
//! and is byte-identical across runs with the same flags, inputs, and seed.

use std::fs;
use std::io::{BufRead, Write};
use std::path::Path;

use affect_core::dataset::{LabeledText, RejectedLine, Task};
use affect_core::error::{CoreError, Result};
use affect_core::eval::{CVReport, metrics};
use affect_core::provenance::RunHeader;
use affect_core::svm::Label;

/// Escape a review text for one-line TSV storage.
pub fn escape_text(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            _ => out.push(c),
        }
    }
    out
}

pub fn unescape_text(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some('\\') => out.push('\\'),
            Some(other) => {
                out.push('\\');
                out.push(other);
            }
            None => out.push('\\'),
        }
    }
    out
}

/// Write a balanced dataset as `label<TAB>task<TAB>text` lines under a
/// comment header.
pub fn write_dataset<W: Write>(
    mut writer: W,
    header: &RunHeader,
    examples: &[LabeledText],
) -> Result<()> {
    writer.write_all(b"# affect dataset v1\n")?;
    writer.write_all(header.comment_lines().as_bytes())?;
    writer.write_all(b"# columns: label\ttask\ttext\n")?;
    for example in examples {
        writeln!(
            writer,
            "{}\t{}\t{}",
            example.label.as_signed_str(),
            example.task.as_str(),
            escape_text(&example.text)
        )?;
    }
    Ok(())
}

/// Read a dataset written by [`write_dataset`].
pub fn read_dataset<R: BufRead>(reader: R) -> Result<Vec<LabeledText>> {
    let mut examples = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.splitn(3, '\t');
        let (label, task, text) = match (fields.next(), fields.next(), fields.next()) {
            (Some(l), Some(t), Some(x)) => (l, t, x),
            _ => {
                return Err(CoreError::Parse {
                    line: line_no,
                    message: "expected label<TAB>task<TAB>text".into(),
                });
            }
        };
        let label = Label::from_signed_str(label).ok_or_else(|| CoreError::Parse {
            line: line_no,
            message: format!("unknown label \"{label}\""),
        })?;
        let task = Task::parse(task).ok_or_else(|| CoreError::Parse {
            line: line_no,
            message: format!("unknown task \"{task}\""),
        })?;
        examples.push(LabeledText {
            text: unescape_text(text),
            task,
            label,
        });
    }
    if examples.is_empty() {
        return Err(CoreError::NoEntries);
    }
    Ok(examples)
}

/// Write the rejects report for review lines that failed validation.
pub fn write_rejects(path: &Path, header: &RunHeader, rejects: &[RejectedLine]) -> Result<()> {
    let mut out = String::from("# affect rejects v1\n");
    out.push_str(&header.comment_lines());
    out.push_str("# columns: line\treason\n");
    for reject in rejects {
        out.push_str(&format!("{}\t{}\n", reject.line, reject.reason));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Everything identifying one evaluation run, for the report files.
pub struct ReportMeta<'a> {
    pub header: &'a RunHeader,
    pub task: Task,
    pub feature_mode: &'a str,
    pub folds: usize,
    pub examples: usize,
}

/// Serialize a cross-validation report as JSON (header first) plus a
/// human-readable table.
pub fn write_report(
    out_dir: &Path,
    stem: &str,
    meta: &ReportMeta<'_>,
    report: &CVReport,
) -> Result<(std::path::PathBuf, std::path::PathBuf)> {
    let json_path = out_dir.join(format!("{stem}.json"));
    let text_path = out_dir.join(format!("{stem}.txt"));

    let document = serde_json::json!({
        "header": meta.header,
        "task": meta.task.as_str(),
        "feature_mode": meta.feature_mode,
        "folds": meta.folds,
        "examples": meta.examples,
        "report": report,
        "pooled_metrics": metrics(&report.pooled_confusion),
    });
    fs::write(&json_path, serde_json::to_string_pretty(&document)?)?;

    let mut text = String::from("# affect report v1\n");
    text.push_str(&meta.header.comment_lines());
    text.push_str(&format!(
        "# task={} feature_mode={} folds={} examples={}\n\n",
        meta.task.as_str(),
        meta.feature_mode,
        meta.folds,
        meta.examples
    ));
    text.push_str(&report.render_table(meta.task.label_names()));
    fs::write(&text_path, text)?;

    Ok((json_path, text_path))
}
