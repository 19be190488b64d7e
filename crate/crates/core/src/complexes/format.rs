//! The presentation input file.
//!
//! ```text
//! [generators]
//! a t
//! [relators]
//! t a t^-1 a^-2
//! [xi]
//! 1
//! [project]
//! a = 0
//! t = 1
//! [cycle]
//! degree = 1
//! a = 1
//! ```
//!
//! `[xi]` holds one rational row per line; its width is the rank of H. An
//! empty `[xi]` section means the trivial group. Lines starting with `#` are
//! comments. The `[cycle]` section is optional and names cells by label:
//! `v` in degree 0, generator names in degree 1, `r1, r2, ...` in degree 2.

use std::fmt::Write as _;

use num_rational::BigRational;

use super::{
    build_presentation_complex, parse_word, Chain, ComplexError, EquivariantChainComplex,
    GroupPresentation, PeriodProjection,
};
use crate::groupring::{parse_poly, Exponent, GroupRingError, IntPoly, XiOrder};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationFile {
    pub presentation: GroupPresentation,
    pub projection: PeriodProjection,
    pub cycle: Option<Chain>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Generators,
    Relators,
    Xi,
    Project,
    Cycle,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ComplexError {
    ComplexError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lift_parse_error(line: usize, offset: usize, e: GroupRingError) -> ComplexError {
    match e {
        GroupRingError::Parse { column, message } => syntax(line, offset + column, message),
        other => syntax(line, offset + 1, other.to_string()),
    }
}

/// Parses a presentation file; errors carry line and column.
pub fn parse_presentation_file(text: &str) -> Result<PresentationFile, ComplexError> {
    let mut section = Section::None;
    let mut generators: Option<Vec<String>> = None;
    let mut relator_lines: Vec<(usize, String)> = Vec::new();
    let mut xi_rows: Vec<(usize, String)> = Vec::new();
    let mut project_lines: Vec<(usize, String)> = Vec::new();
    let mut cycle_lines: Vec<(usize, String)> = Vec::new();
    let mut seen_xi = false;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.starts_with('[') {
            section = match line {
                "[generators]" => Section::Generators,
                "[relators]" => Section::Relators,
                "[xi]" => {
                    seen_xi = true;
                    Section::Xi
                }
                "[project]" => Section::Project,
                "[cycle]" => Section::Cycle,
                _ => return Err(syntax(lineno, 1, format!("unknown section `{line}`"))),
            };
            continue;
        }
        let entry = (lineno, raw.to_string());
        match section {
            Section::None => return Err(syntax(lineno, 1, "content before the first section")),
            Section::Generators => {
                generators
                    .get_or_insert_with(Vec::new)
                    .extend(line.split_whitespace().map(str::to_string));
            }
            Section::Relators => relator_lines.push(entry),
            Section::Xi => xi_rows.push(entry),
            Section::Project => project_lines.push(entry),
            Section::Cycle => cycle_lines.push(entry),
        }
    }
    let generators = generators.ok_or_else(|| syntax(1, 1, "missing [generators] section"))?;
    if !seen_xi {
        return Err(syntax(1, 1, "missing [xi] section"));
    }
    let mut relators = Vec::new();
    for (lineno, raw) in &relator_lines {
        relators.push(
            parse_word(raw.trim_start(), &generators, *lineno)
                .map_err(|e| shift_column(e, raw.len() - raw.trim_start().len()))?,
        );
    }
    let presentation = GroupPresentation::new(generators.clone(), relators)?;

    let xi = if xi_rows.is_empty() {
        XiOrder::trivial()
    } else {
        let mut rows = Vec::new();
        for (lineno, raw) in &xi_rows {
            let mut row = Vec::new();
            for (col, tok) in tokens(raw) {
                let x: BigRational = tok
                    .parse()
                    .map_err(|_| syntax(*lineno, col, format!("bad rational `{tok}`")))?;
                row.push(x);
            }
            rows.push(row);
        }
        let rank = rows[0].len();
        XiOrder::new(rank, rows).map_err(|e| syntax(xi_rows[0].0, 1, e.to_string()))?
    };
    let rank = xi.rank();

    let mut images: Vec<Option<Exponent>> = vec![None; generators.len()];
    for (lineno, raw) in &project_lines {
        let (lhs, rhs) = raw
            .split_once('=')
            .ok_or_else(|| syntax(*lineno, 1, "expected `generator = exponents`"))?;
        let name = lhs.trim();
        let g = presentation
            .generator_index(name)
            .ok_or_else(|| syntax(*lineno, 1, format!("unknown generator `{name}`")))?;
        let offset = lhs.len() + 1;
        let mut e = Vec::new();
        for (col, tok) in tokens(rhs) {
            e.push(
                tok.parse::<i64>()
                    .map_err(|_| syntax(*lineno, offset + col, format!("bad integer `{tok}`")))?,
            );
        }
        if e.len() != rank {
            return Err(syntax(
                *lineno,
                offset + 1,
                format!("expected {rank} exponent entries, found {}", e.len()),
            ));
        }
        images[g] = Some(Exponent::new(e));
    }
    let images = images
        .into_iter()
        .enumerate()
        .map(|(g, e)| {
            e.ok_or_else(|| {
                syntax(
                    1,
                    1,
                    format!("generator `{}` has no projection", generators[g]),
                )
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let projection = PeriodProjection::new(images, xi)?;

    let cycle = if cycle_lines.is_empty() {
        None
    } else {
        let complex = build_presentation_complex(&presentation, &projection)?;
        Some(parse_cycle(&cycle_lines, &complex)?)
    };
    Ok(PresentationFile {
        presentation,
        projection,
        cycle,
    })
}

fn shift_column(e: ComplexError, by: usize) -> ComplexError {
    match e {
        ComplexError::Syntax {
            line,
            column,
            message,
        } => ComplexError::Syntax {
            line,
            column: column + by,
            message,
        },
        other => other,
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in s.char_indices() {
        if ch.is_whitespace() {
            if let Some(st) = start.take() {
                out.push((st + 1, &s[st..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(st) = start {
        out.push((st + 1, &s[st..]));
    }
    out
}

fn parse_cycle(
    lines: &[(usize, String)],
    complex: &EquivariantChainComplex,
) -> Result<Chain, ComplexError> {
    let (first_line, first) = &lines[0];
    let (k, v) = first
        .split_once('=')
        .ok_or_else(|| syntax(*first_line, 1, "expected `degree = q`"))?;
    if k.trim() != "degree" {
        return Err(syntax(
            *first_line,
            1,
            "the cycle section starts with `degree = q`",
        ));
    }
    let degree: usize = v
        .trim()
        .parse()
        .map_err(|_| syntax(*first_line, k.len() + 2, "bad degree"))?;
    if degree > complex.top_degree() {
        return Err(syntax(
            *first_line,
            k.len() + 2,
            format!("no cells in degree {degree}"),
        ));
    }
    let mut chain = Chain::zero(degree, complex.cells(degree), complex.rank());
    for (lineno, raw) in &lines[1..] {
        let (lhs, rhs) = raw
            .split_once('=')
            .ok_or_else(|| syntax(*lineno, 1, "expected `cell = polynomial`"))?;
        let label = lhs.trim();
        let idx = complex.cell_index(degree, label).ok_or_else(|| {
            syntax(
                *lineno,
                1,
                format!("unknown cell `{label}` in degree {degree}"),
            )
        })?;
        let p: IntPoly = parse_poly(rhs, complex.rank())
            .map_err(|e| lift_parse_error(*lineno, lhs.len() + 1, e))?;
        chain.coords[idx] = &chain.coords[idx] + &p;
    }
    Ok(chain)
}

impl PresentationFile {
    pub fn complex(&self) -> Result<EquivariantChainComplex, ComplexError> {
        build_presentation_complex(&self.presentation, &self.projection)
    }

    /// Canonical text form; parsing it gives back an equal value.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let pres = &self.presentation;
        s.push_str("[generators]\n");
        s.push_str(&pres.generators().join(" "));
        s.push_str("\n[relators]\n");
        for w in pres.relators() {
            s.push_str(&pres.word_to_string(w));
            s.push('\n');
        }
        s.push_str("[xi]\n");
        if self.projection.rank() > 0 {
            for row in self.projection.xi().rows() {
                let entries: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                s.push_str(&entries.join(" "));
                s.push('\n');
            }
        }
        s.push_str("[project]\n");
        for (g, e) in pres.generators().iter().zip(self.projection.images()) {
            let entries: Vec<String> = e.entries().iter().map(|k| k.to_string()).collect();
            let _ = writeln!(s, "{g} = {}", entries.join(" "));
        }
        if let Some(c) = &self.cycle {
            let labels: Vec<String> = match c.degree {
                0 => vec!["v".into()],
                1 => pres.generators().to_vec(),
                _ => (1..=pres.relators().len())
                    .map(|i| format!("r{i}"))
                    .collect(),
            };
            let _ = writeln!(s, "[cycle]\ndegree = {}", c.degree);
            for (label, p) in labels.iter().zip(&c.coords) {
                if !p.is_zero() {
                    let _ = writeln!(s, "{label} = {p}");
                }
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::fixtures;

    const BS12: &str = "\
# Baumslag-Solitar group BS(1,2)
[generators]
a t
[relators]
t a t^-1 a^-2
[xi]
1
[project]
a = 0
t = 1
[cycle]
degree = 1
a = 1
";

    #[test]
    fn parses_baumslag_solitar() {
        let f = parse_presentation_file(BS12).unwrap();
        assert_eq!(f.presentation.generators(), &["a", "t"]);
        let c = f.complex().unwrap();
        assert_eq!(c.ranks(), &[1, 2, 1]);
        let z = f.cycle.unwrap();
        assert_eq!(z.degree, 1);
        assert!(c.is_cycle(&z).unwrap());
        assert_eq!(z, fixtures::bs12(1).cycle);
    }

    #[test]
    fn emitted_fixtures_round_trip() {
        for fx in fixtures::corpus() {
            let Some(file) = fx.file.as_ref() else {
                continue;
            };
            let text = file.to_text();
            let back = parse_presentation_file(&text).unwrap();
            assert_eq!(&back, file, "{}", fx.name);
            assert_eq!(back.to_text(), text);
            assert_eq!(back.complex().unwrap(), fx.complex);
        }
    }

    #[test]
    fn errors_carry_positions() {
        let bad = BS12.replace("t a t^-1 a^-2", "t a t^-1 b^-2");
        match parse_presentation_file(&bad) {
            Err(ComplexError::Syntax { line, column, .. }) => assert_eq!((line, column), (5, 10)),
            other => panic!("unexpected {other:?}"),
        }
        let bad = BS12.replace("a = 1\n", "a = 1 +\n");
        assert!(matches!(
            parse_presentation_file(&bad),
            Err(ComplexError::Syntax { line: 13, .. })
        ));
        let bad = BS12.replace("[xi]\n1\n", "[xi]\nx\n");
        assert!(matches!(
            parse_presentation_file(&bad),
            Err(ComplexError::Syntax {
                line: 7,
                column: 1,
                ..
            })
        ));
    }
}
