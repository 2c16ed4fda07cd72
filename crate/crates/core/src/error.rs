use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid time series: {0}")]
    InvalidSeries(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("trace carries no energy; significant duration is undefined")]
    ZeroEnergy,

    #[error("need at least 1 s of pre-event noise before t = {p_arrival:.3} s, trace starts at {start:.3} s")]
    InsufficientNoise { p_arrival: f64, start: f64 },

    #[error("no frequency has SNR above {threshold}")]
    EmptyBand { threshold: f64 },

    #[error("frequency {freq} Hz is outside (0, {nyquist}] Hz")]
    AboveNyquist { freq: f64, nyquist: f64 },

    #[error("frequency {freq} Hz is not on the transform grid (df = {df} Hz)")]
    OffGrid { freq: f64, df: f64 },

    #[error("record unusable for the central-frequency model: {0}")]
    UnusableFcRecord(String),

    #[error("STA/LTA detector never exceeded {threshold}")]
    NoTrigger { threshold: f64 },

    #[error("period {period} s is not tabulated; available: {available}")]
    UntabulatedPeriod { period: f64, available: String },

    #[error("no coefficients for {0}")]
    UnknownDefinition(String),

    #[error("ln(R_RUP) is singular at R_RUP = {0} km")]
    DistanceSingularity(f64),

    #[error("coefficient file, row {row}, column {column}: {message}")]
    CoefficientParse {
        row: usize,
        column: String,
        message: String,
    },

    #[error("envelope calibration did not converge: target D_SR {target:.4} s, achieved {achieved:.4} s")]
    CalibrationFailed { target: f64, achieved: f64 },

    #[error("spectrogram slice {0} is all zero")]
    DegenerateSlice(usize),

    #[error("{count} simulation(s) failed: {summary}")]
    EnsembleFailures { count: usize, summary: String },

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
