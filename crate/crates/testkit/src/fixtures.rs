//! Reference counts and scores of the FM1 classification experiment.

/// Row and column order of [`CONFUSION`] and [`ACCURACY_BY_CLASS`].
pub const LABELS: [&str; 8] = ["highway", "settlement", "booth", "tunnel", "exit", "overpass", "traffic", "road"];

/// Rows: actual class. Columns: classified as.
pub const CONFUSION: [[u64; 8]; 8] = [
    [4310, 1, 0, 0, 1, 6, 1, 18],
    [12, 152, 0, 0, 0, 0, 0, 12],
    [5, 2, 47, 0, 0, 0, 0, 1],
    [6, 1, 0, 380, 1, 0, 0, 0],
    [1, 0, 0, 2, 28, 0, 0, 0],
    [15, 0, 0, 1, 0, 16, 0, 1],
    [5, 2, 1, 0, 0, 0, 68, 3],
    [39, 11, 0, 0, 0, 1, 1, 464],
];

/// TP rate, FP rate, precision, recall, F-measure per class as printed,
/// then the weighted average row.
pub const ACCURACY_BY_CLASS: [[f64; 5]; 9] = [
    [0.994, 0.065, 0.981, 0.994, 0.987],
    [0.864, 0.003, 0.899, 0.864, 0.881],
    [0.855, 0.0, 0.979, 0.855, 0.913],
    [0.979, 0.001, 0.992, 0.979, 0.986],
    [0.903, 0.0, 0.933, 0.903, 0.918],
    [0.485, 0.001, 0.696, 0.485, 0.571],
    [0.861, 0.0, 0.971, 0.861, 0.913],
    [0.899, 0.007, 0.930, 0.899, 0.914],
    [0.973, 0.051, 0.973, 0.973, 0.973],
];

pub const ACCURACY: f64 = 0.973;

/// Instances per class in [`LABELS`] order.
pub const SUPPORT: [u64; 8] = [4337, 176, 55, 388, 31, 33, 79, 516];
