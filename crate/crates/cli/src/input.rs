//! Loading presentation files, fact bases and built-in fixtures.

use std::fs;

use serde::Serialize;
use sha2::{Digest, Sha256};

use movcat_core::catbounds::FactBase;
use movcat_core::complexes::{fixtures, parse_presentation_file, Chain, EquivariantChainComplex};
use movcat_core::XiOrder;

use crate::job::InputRef;
use crate::CliError;

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Where an input came from, as recorded in the report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputInfo {
    pub source: &'static str,
    pub name: String,
    pub sha256: String,
}

impl InputInfo {
    pub fn reference(&self) -> InputRef {
        match self.source {
            "fixture" => InputRef::Fixture(self.name.clone()),
            _ => InputRef::File(self.name.clone().into()),
        }
    }
}

/// A chain complex with its distinguished cycle.
#[derive(Clone, Debug)]
pub struct ComplexInput {
    pub info: InputInfo,
    pub complex: EquivariantChainComplex,
    pub cycle: Option<Chain>,
}

impl ComplexInput {
    pub fn cycle(&self) -> Result<&Chain, CliError> {
        self.cycle
            .as_ref()
            .ok_or_else(|| CliError::Input(format!("{}: no [cycle] section", self.info.name)))
    }
}

fn read(r: &InputRef) -> Result<(InputInfo, Option<String>), CliError> {
    match r {
        InputRef::File(p) => {
            let bytes =
                fs::read(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
            let text = String::from_utf8(bytes.clone())
                .map_err(|_| CliError::Input(format!("{}: not UTF-8", p.display())))?;
            let info = InputInfo {
                source: "file",
                name: p.display().to_string(),
                sha256: sha256_hex(&bytes),
            };
            Ok((info, Some(text)))
        }
        InputRef::Fixture(name) => {
            let fx = fixtures::by_name(name)
                .ok_or_else(|| CliError::Input(format!("unknown fixture {name}")))?;
            let canonical = fx
                .file
                .as_ref()
                .map(|f| f.to_text())
                .unwrap_or_else(|| format!("fixture {name}\n"));
            let info = InputInfo {
                source: "fixture",
                name: name.clone(),
                sha256: sha256_hex(canonical.as_bytes()),
            };
            Ok((info, None))
        }
    }
}

fn parse_xi(xi: &str) -> Result<XiOrder, CliError> {
    XiOrder::parse(xi).map_err(|e| CliError::Input(format!("--xi: {e}")))
}

pub fn load_complex(r: &InputRef, xi: Option<&str>) -> Result<ComplexInput, CliError> {
    let (info, text) = read(r)?;
    let (complex, cycle) = match text {
        Some(text) => {
            let mut file = parse_presentation_file(&text)
                .map_err(|e| CliError::Input(format!("{}: {e}", info.name)))?;
            if let Some(xi) = xi {
                file.projection = file
                    .projection
                    .with_xi(parse_xi(xi)?)
                    .map_err(|e| CliError::Input(format!("--xi: {e}")))?;
            }
            let complex = file
                .complex()
                .map_err(|e| CliError::Input(format!("{}: {e}", info.name)))?;
            (complex, file.cycle)
        }
        None => {
            let fx = fixtures::by_name(&info.name).expect("checked in read");
            let complex = match xi {
                Some(xi) => fx
                    .complex
                    .with_xi(parse_xi(xi)?)
                    .map_err(|e| CliError::Input(format!("--xi: {e}")))?,
                None => fx.complex,
            };
            (complex, Some(fx.cycle))
        }
    };
    Ok(ComplexInput {
        info,
        complex,
        cycle,
    })
}

pub fn load_facts(r: &InputRef) -> Result<(InputInfo, FactBase), CliError> {
    let (info, text) = read(r)?;
    let text =
        text.ok_or_else(|| CliError::Input(format!("{}: fixtures are not fact bases", info.name)))?;
    let facts =
        FactBase::parse(&text).map_err(|e| CliError::Input(format!("{}: {e}", info.name)))?;
    Ok((info, facts))
}
