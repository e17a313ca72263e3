//! Parameter sweeps behind the command-line tool, each emitting plot-ready CSV tables.

mod config;
mod studies;
mod table;

pub use config::*;
pub use studies::*;
pub use table::{Cell, Table};

use crate::error::Result;

/// Every sweep the command-line tool exposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Study {
    H2Curve,
    Ratio,
    Squeeze,
    Cut,
    Noise,
    Trotter,
    Kitaev,
    HybridCompare,
    ResourcePrep,
    AdditionalWeight,
}

impl Study {
    pub const ALL: [Study; 10] = [
        Study::H2Curve,
        Study::Ratio,
        Study::Squeeze,
        Study::Cut,
        Study::Noise,
        Study::Trotter,
        Study::Kitaev,
        Study::HybridCompare,
        Study::ResourcePrep,
        Study::AdditionalWeight,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Study::H2Curve => "h2-curve",
            Study::Ratio => "ratio-study",
            Study::Squeeze => "squeeze-study",
            Study::Cut => "cut-study",
            Study::Noise => "noise-study",
            Study::Trotter => "trotter-study",
            Study::Kitaev => "kitaev-sweep",
            Study::HybridCompare => "hybrid-compare",
            Study::ResourcePrep => "resource-prep",
            Study::AdditionalWeight => "additional-weight",
        }
    }

    pub fn from_name(name: &str) -> Option<Study> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }

    pub fn run(self, ctx: &Context) -> Result<Vec<Table>> {
        Ok(match self {
            Study::H2Curve => vec![h2_curve_table(&h2_curve(ctx)?)],
            Study::Ratio => vec![ratio_table(&ratio_study(ctx)?)],
            Study::Squeeze => squeeze_tables(&squeeze_study(ctx)?),
            Study::Cut => vec![cut_table(&cut_study(ctx)?)],
            Study::Noise => vec![noise_table(&noise_study(ctx)?)],
            Study::Trotter => vec![trotter_table(&trotter_study(ctx)?)],
            Study::Kitaev => vec![kitaev_table(&kitaev_sweep(ctx)?)],
            Study::HybridCompare => hybrid_tables(&hybrid_compare(ctx)?, &ctx.config)?,
            Study::ResourcePrep => resource_tables(&resource_prep(ctx)?),
            Study::AdditionalWeight => vec![weight_table(&additional_weight(ctx)?)],
        })
    }
}

/// Writes each table as `<dir>/<name>.csv` behind a `#` provenance line; returns the paths.
pub fn write_tables(dir: &std::path::Path, tables: &[Table], comment: &str) -> Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for t in tables {
        let path = dir.join(t.file_name());
        let f = std::io::BufWriter::new(std::fs::File::create(&path)?);
        t.write_csv(f, Some(comment))?;
        paths.push(path);
    }
    Ok(paths)
}
