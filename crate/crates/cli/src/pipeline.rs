//! The experiment's data model and batch orchestration: six-channel IMU
//! recordings, per-session metadata, and the manifest-driven run that turns
//! a list of (file, metadata) entries into one tidy metrics table.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use rqa_core::embedding::{
    ami_curve, cao_curves, consensus_params, first_local_minimum, select_min_dimension,
    EmbeddingParams,
};
use rqa_core::preprocess::{window_slice, SmoothnessLevel, WindowSpec};
use rqa_core::rqa::{rqa_all, RqaMetrics};
use rqa_core::TimeSeries;

use crate::config::{AnalysisConfig, ParamMode};
use crate::io::read_numeric_csv;

/// Default sample rate of the IMU recordings, in Hz.
pub const DEFAULT_SAMPLE_RATE_HZ: f64 = 50.0;

/// One of the six IMU channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    AccelX,
    AccelY,
    AccelZ,
    GyroX,
    GyroY,
    GyroZ,
}

impl Axis {
    pub fn as_str(&self) -> &'static str {
        match self {
            Axis::AccelX => "AccelX",
            Axis::AccelY => "AccelY",
            Axis::AccelZ => "AccelZ",
            Axis::GyroX => "GyroX",
            Axis::GyroY => "GyroY",
            Axis::GyroZ => "GyroZ",
        }
    }
}

impl FromStr for Axis {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "").as_str() {
            "accelx" => Ok(Axis::AccelX),
            "accely" => Ok(Axis::AccelY),
            "accelz" => Ok(Axis::AccelZ),
            "gyrox" => Ok(Axis::GyroX),
            "gyroy" => Ok(Axis::GyroY),
            "gyroz" => Ok(Axis::GyroZ),
            other => bail!("unknown axis {other:?}, expected Accel{{X,Y,Z}} or Gyro{{X,Y,Z}}"),
        }
    }
}

/// The four imitation activities: horizontal/vertical arm movement at
/// normal/faster speed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activity {
    Hn,
    Hf,
    Vn,
    Vf,
}

impl Activity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Activity::Hn => "HN",
            Activity::Hf => "HF",
            Activity::Vn => "VN",
            Activity::Vf => "VF",
        }
    }

    /// The channel conventionally analyzed for this movement plane:
    /// GyroZ for horizontal, GyroY for vertical.
    pub fn default_axis(&self) -> Axis {
        match self {
            Activity::Hn | Activity::Hf => Axis::GyroZ,
            Activity::Vn | Activity::Vf => Axis::GyroY,
        }
    }
}

impl FromStr for Activity {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "HN" => Ok(Activity::Hn),
            "HF" => Ok(Activity::Hf),
            "VN" => Ok(Activity::Vn),
            "VF" => Ok(Activity::Vf),
            other => bail!("unknown activity {other:?}, expected HN|HF|VN|VF"),
        }
    }
}

/// Everything that identifies one analyzed series.
#[derive(Debug, Clone)]
pub struct SessionMeta {
    pub participant: String,
    /// Sensor identifier, e.g. HS01 (on the participant) or RS01 (on the
    /// robot). Free-form so additional sensors stay representable.
    pub sensor: String,
    pub activity: Activity,
    pub axis: Axis,
    pub smoothness: SmoothnessLevel,
    pub window: WindowSpec,
}

/// One line of the batch manifest.
#[derive(Debug, Clone)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub meta: SessionMeta,
}

/// Column-name mapping from CSV headers to the six channels.
#[derive(Debug, Clone)]
pub struct ColumnSchema {
    pub accel_x: String,
    pub accel_y: String,
    pub accel_z: String,
    pub gyro_x: String,
    pub gyro_y: String,
    pub gyro_z: String,
}

impl Default for ColumnSchema {
    fn default() -> Self {
        Self {
            accel_x: "accel_x".into(),
            accel_y: "accel_y".into(),
            accel_z: "accel_z".into(),
            gyro_x: "gyro_x".into(),
            gyro_y: "gyro_y".into(),
            gyro_z: "gyro_z".into(),
        }
    }
}

impl ColumnSchema {
    fn name(&self, axis: Axis) -> &str {
        match axis {
            Axis::AccelX => &self.accel_x,
            Axis::AccelY => &self.accel_y,
            Axis::AccelZ => &self.accel_z,
            Axis::GyroX => &self.gyro_x,
            Axis::GyroY => &self.gyro_y,
            Axis::GyroZ => &self.gyro_z,
        }
    }
}

/// A triaxial accelerometer + triaxial gyroscope recording; all six
/// channels share one length and sample rate.
#[derive(Debug, Clone)]
pub struct ImuRecording {
    pub accel: [TimeSeries; 3],
    pub gyro: [TimeSeries; 3],
}

impl ImuRecording {
    pub fn channel(&self, axis: Axis) -> &TimeSeries {
        match axis {
            Axis::AccelX => &self.accel[0],
            Axis::AccelY => &self.accel[1],
            Axis::AccelZ => &self.accel[2],
            Axis::GyroX => &self.gyro[0],
            Axis::GyroY => &self.gyro[1],
            Axis::GyroZ => &self.gyro[2],
        }
    }

    pub fn len(&self) -> usize {
        self.accel[0].len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Load a six-channel CSV recording through a column-name mapping.
pub fn load_recording(
    path: &Path,
    schema: &ColumnSchema,
    sample_rate_hz: f64,
) -> Result<ImuRecording> {
    let table = read_numeric_csv(path)?;
    let pull = |axis: Axis| -> Result<TimeSeries> {
        table
            .series(schema.name(axis), sample_rate_hz)
            .with_context(|| format!("{}: channel {}", path.display(), axis.as_str()))
    };
    let recording = ImuRecording {
        accel: [
            pull(Axis::AccelX)?,
            pull(Axis::AccelY)?,
            pull(Axis::AccelZ)?,
        ],
        gyro: [pull(Axis::GyroX)?, pull(Axis::GyroY)?, pull(Axis::GyroZ)?],
    };
    // read_numeric_csv rejects ragged rows, so all columns agree already;
    // this guards schema mappings that alias a shorter file.
    let len = recording.len();
    for axis in [
        Axis::AccelY,
        Axis::AccelZ,
        Axis::GyroX,
        Axis::GyroY,
        Axis::GyroZ,
    ] {
        if recording.channel(axis).len() != len {
            bail!(
                "{}: channel {} has {} samples, expected {len}",
                path.display(),
                axis.as_str(),
                recording.channel(axis).len()
            );
        }
    }
    Ok(recording)
}

const MANIFEST_COLUMNS: [&str; 8] = [
    "path",
    "participant",
    "sensor",
    "activity",
    "axis",
    "smoothness",
    "window_offset",
    "window_length",
];

/// Read the batch manifest: a CSV with columns
/// `path,participant,sensor,activity,axis,smoothness,window_offset,window_length`.
/// Relative data paths are resolved against the manifest's directory.
pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut lines = text.lines();
    let header: Vec<&str> = lines
        .next()
        .context("manifest is empty")?
        .split(',')
        .map(str::trim)
        .collect();
    if header != MANIFEST_COLUMNS {
        bail!(
            "manifest header must be {:?}, got {:?}",
            MANIFEST_COLUMNS.join(","),
            header.join(",")
        );
    }
    let mut entries = Vec::new();
    for (idx, raw) in lines.enumerate() {
        let line_no = idx + 2;
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split(',').map(str::trim).collect();
        if fields.len() != MANIFEST_COLUMNS.len() {
            bail!(
                "manifest line {line_no}: has {} fields, expected {}",
                fields.len(),
                MANIFEST_COLUMNS.len()
            );
        }
        let ctx = |what: &str| format!("manifest line {line_no}: {what}");
        let data_path = {
            let p = PathBuf::from(fields[0]);
            if p.is_absolute() {
                p
            } else {
                base.join(p)
            }
        };
        let window = WindowSpec::new(
            fields[7]
                .parse()
                .with_context(|| ctx("bad window_length"))?,
            fields[6]
                .parse()
                .with_context(|| ctx("bad window_offset"))?,
        )
        .map_err(|e| anyhow::anyhow!("{e}"))
        .with_context(|| ctx("bad window"))?;
        entries.push(ManifestEntry {
            path: data_path,
            meta: SessionMeta {
                participant: fields[1].to_string(),
                sensor: fields[2].to_string(),
                activity: fields[3].parse().with_context(|| ctx("bad activity"))?,
                axis: fields[4].parse().with_context(|| ctx("bad axis"))?,
                smoothness: fields[5]
                    .parse()
                    .map_err(|e| anyhow::anyhow!("{e}"))
                    .with_context(|| ctx("bad smoothness"))?,
                window,
            },
        });
    }
    if entries.is_empty() {
        bail!("manifest lists no entries");
    }
    Ok(entries)
}

/// The parameters actually used for one entry plus its metrics.
#[derive(Debug, Clone)]
pub struct RowResult {
    pub params: EmbeddingParams,
    pub eps: f64,
    pub metrics: RqaMetrics,
}

/// One output row: the entry metadata and either metrics or the error that
/// stopped this entry.
#[derive(Debug, Clone)]
pub struct BatchRow {
    pub entry: ManifestEntry,
    pub outcome: std::result::Result<RowResult, String>,
}

/// Full batch result, in manifest order.
#[derive(Debug, Clone)]
pub struct BatchOutcome {
    pub rows: Vec<BatchRow>,
    /// Mean of the per-series estimates, present in estimate mode when at
    /// least one entry succeeded.
    pub consensus: Option<EmbeddingParams>,
}

impl BatchOutcome {
    pub fn any_failed(&self) -> bool {
        self.rows.iter().any(|r| r.outcome.is_err())
    }
}

/// Select axis → window → normalize/smooth → (estimate params) → RQA for
/// one already-loaded series.
fn analyze_series(
    raw: &TimeSeries,
    meta: &SessionMeta,
    config: &AnalysisConfig,
) -> Result<RowResult> {
    let windowed = window_slice(raw, &meta.window)?;
    let prepared = meta.smoothness.apply(&windowed)?;
    let params = match config.mode {
        ParamMode::Fixed => EmbeddingParams::new(config.m, config.tau)?,
        ParamMode::Estimate => {
            let ami = ami_curve(&prepared, config.tau_max, config.bins)?;
            let tau = first_local_minimum(&ami)?.tau;
            let curves = cao_curves(&prepared, tau, config.m_max)?;
            let m = select_min_dimension(&curves, config.plateau)?;
            EmbeddingParams::new(m, tau)?
        }
    };
    let metrics = rqa_all(&prepared, params, config.eps, config.norm, config.dmin)?;
    Ok(RowResult {
        params,
        eps: config.eps,
        metrics,
    })
}

/// Run every manifest entry; per-entry failures become error rows and the
/// batch continues. Output order is manifest order.
pub fn run_batch(
    entries: &[ManifestEntry],
    config: &AnalysisConfig,
    schema: &ColumnSchema,
    sample_rate_hz: f64,
) -> BatchOutcome {
    let mut rows = Vec::with_capacity(entries.len());
    let mut estimates = Vec::new();
    for entry in entries {
        let outcome = load_recording(&entry.path, schema, sample_rate_hz)
            .and_then(|recording| {
                analyze_series(recording.channel(entry.meta.axis), &entry.meta, config)
            })
            .map_err(|e| format!("{e:#}"));
        if let (ParamMode::Estimate, Ok(row)) = (config.mode, &outcome) {
            estimates.push(row.params);
        }
        rows.push(BatchRow {
            entry: entry.clone(),
            outcome,
        });
    }
    let consensus = match config.mode {
        ParamMode::Estimate => consensus_params(&estimates).ok(),
        ParamMode::Fixed => None,
    };
    BatchOutcome { rows, consensus }
}

/// Tidy-CSV serialization of a batch: one row per entry carrying the full
/// metadata, then a `consensus` row in estimate mode. Error messages land
/// in the final column with commas flattened out.
pub fn batch_to_csv(outcome: &BatchOutcome) -> String {
    let mut out = String::from(
        "path,participant,sensor,activity,axis,smoothness,window_offset,window_length,\
         m,tau,eps,rec,det,ratio,ent,error\n",
    );
    for row in &outcome.rows {
        let meta = &row.entry.meta;
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},{}",
            row.entry.path.display(),
            meta.participant,
            meta.sensor,
            meta.activity.as_str(),
            meta.axis.as_str(),
            meta.smoothness.as_str(),
            meta.window.offset_samples,
            meta.window.length_samples,
        );
        match &row.outcome {
            Ok(r) => {
                let ratio = r.metrics.ratio.map(|v| v.to_string()).unwrap_or_default();
                let _ = writeln!(
                    out,
                    ",{},{},{},{},{},{ratio},{},",
                    r.params.dimension_m,
                    r.params.delay_tau,
                    r.eps,
                    r.metrics.rec,
                    r.metrics.det,
                    r.metrics.ent
                );
            }
            Err(message) => {
                let flat = message.replace([',', '\n'], ";");
                let _ = writeln!(out, ",,,,,,,,{flat}");
            }
        }
    }
    if let Some(consensus) = outcome.consensus {
        let _ = writeln!(
            out,
            "consensus,,,,,,,,{},{},,,,,,",
            consensus.dimension_m, consensus.delay_tau
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_parsing_accepts_both_spellings() {
        assert_eq!("GyroZ".parse::<Axis>().unwrap(), Axis::GyroZ);
        assert_eq!("gyro_z".parse::<Axis>().unwrap(), Axis::GyroZ);
        assert_eq!("ACCELY".parse::<Axis>().unwrap(), Axis::AccelY);
        assert!("pitch".parse::<Axis>().is_err());
    }

    #[test]
    fn activity_axis_convention() {
        assert_eq!(Activity::Hn.default_axis(), Axis::GyroZ);
        assert_eq!(Activity::Hf.default_axis(), Axis::GyroZ);
        assert_eq!(Activity::Vn.default_axis(), Axis::GyroY);
        assert_eq!(Activity::Vf.default_axis(), Axis::GyroY);
    }
}
