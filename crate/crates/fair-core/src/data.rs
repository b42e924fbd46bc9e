//! Dataset representation, delimited-file ingestion, per-sample
//! standardization and stratified train/test splitting.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use ndarray::{Array2, ArrayView1};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{FairError, Result};

/// One of the two class tags carried by every sample.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum ClassLabel {
    One,
    Two,
}

impl ClassLabel {
    pub fn index(self) -> usize {
        match self {
            ClassLabel::One => 0,
            ClassLabel::Two => 1,
        }
    }

    pub fn other(self) -> ClassLabel {
        match self {
            ClassLabel::One => ClassLabel::Two,
            ClassLabel::Two => ClassLabel::One,
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::One => write!(f, "1"),
            ClassLabel::Two => write!(f, "2"),
        }
    }
}

/// Two-class dataset: a dense n x p feature matrix plus per-sample labels.
///
/// Immutable after construction. The constructor enforces: n >= 4, p >= 1,
/// all values finite, and at least two samples in each class.
#[derive(Clone, Debug)]
pub struct LabeledDataset {
    features: Array2<f64>,
    labels: Vec<ClassLabel>,
    feature_names: Option<Vec<String>>,
    sample_ids: Option<Vec<String>>,
    /// Original text of the two label values, in first-seen order.
    label_names: [String; 2],
}

impl LabeledDataset {
    pub fn new(features: Array2<f64>, labels: Vec<ClassLabel>) -> Result<Self> {
        Self::with_names(features, labels, None, None, None)
    }

    pub fn with_names(
        features: Array2<f64>,
        labels: Vec<ClassLabel>,
        feature_names: Option<Vec<String>>,
        sample_ids: Option<Vec<String>>,
        label_names: Option<[String; 2]>,
    ) -> Result<Self> {
        let (n, p) = features.dim();
        if labels.len() != n {
            return Err(FairError::DimensionMismatch {
                expected: n,
                got: labels.len(),
            });
        }
        if n < 4 {
            return Err(FairError::InvalidData(format!(
                "need at least 4 samples, got {n}"
            )));
        }
        if p < 1 {
            return Err(FairError::InvalidData("need at least 1 feature".into()));
        }
        if let Some(bad) = features.iter().position(|v| !v.is_finite()) {
            return Err(FairError::InvalidData(format!(
                "non-finite feature value at sample {}, feature {}",
                bad / p,
                bad % p
            )));
        }
        let n1 = labels.iter().filter(|&&l| l == ClassLabel::One).count();
        let n2 = n - n1;
        if n1 < 2 || n2 < 2 {
            return Err(FairError::InvalidData(format!(
                "each class needs at least 2 samples (got {n1} and {n2})"
            )));
        }
        if let Some(names) = &feature_names {
            if names.len() != p {
                return Err(FairError::DimensionMismatch {
                    expected: p,
                    got: names.len(),
                });
            }
        }
        if let Some(ids) = &sample_ids {
            if ids.len() != n {
                return Err(FairError::DimensionMismatch {
                    expected: n,
                    got: ids.len(),
                });
            }
        }
        Ok(Self {
            features,
            labels,
            feature_names,
            sample_ids,
            label_names: label_names.unwrap_or_else(|| ["1".into(), "2".into()]),
        })
    }

    pub fn n(&self) -> usize {
        self.features.nrows()
    }

    pub fn p(&self) -> usize {
        self.features.ncols()
    }

    pub fn features(&self) -> &Array2<f64> {
        &self.features
    }

    pub fn labels(&self) -> &[ClassLabel] {
        &self.labels
    }

    pub fn sample(&self, i: usize) -> ArrayView1<'_, f64> {
        self.features.row(i)
    }

    pub fn feature_names(&self) -> Option<&[String]> {
        self.feature_names.as_deref()
    }

    pub fn sample_ids(&self) -> Option<&[String]> {
        self.sample_ids.as_deref()
    }

    pub fn label_names(&self) -> &[String; 2] {
        &self.label_names
    }

    /// Printable label for class `l` (original text when loaded from a file).
    pub fn label_name(&self, l: ClassLabel) -> &str {
        &self.label_names[l.index()]
    }

    /// Printable id of sample `i` (its row index when no ids were supplied).
    pub fn sample_name(&self, i: usize) -> String {
        match &self.sample_ids {
            Some(ids) => ids[i].clone(),
            None => i.to_string(),
        }
    }

    /// (n1, n2) class sample counts.
    pub fn class_counts(&self) -> (usize, usize) {
        let n1 = self
            .labels
            .iter()
            .filter(|&&l| l == ClassLabel::One)
            .count();
        (n1, self.labels.len() - n1)
    }

    /// Row indices belonging to class `l`, in dataset order.
    pub fn class_indices(&self, l: ClassLabel) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &lab)| lab == l)
            .map(|(i, _)| i)
            .collect()
    }

    /// New dataset restricted to `rows` (in the given order).
    pub fn subset(&self, rows: &[usize]) -> Result<Self> {
        let p = self.p();
        let mut features = Array2::zeros((rows.len(), p));
        let mut labels = Vec::with_capacity(rows.len());
        for (new_i, &i) in rows.iter().enumerate() {
            features.row_mut(new_i).assign(&self.features.row(i));
            labels.push(self.labels[i]);
        }
        let sample_ids = self
            .sample_ids
            .as_ref()
            .map(|ids| rows.iter().map(|&i| ids[i].clone()).collect());
        Self::with_names(
            features,
            labels,
            self.feature_names.clone(),
            sample_ids,
            Some(self.label_names.clone()),
        )
    }
}

/// Whether the file stores one sample per row or one sample per column.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Orientation {
    SamplesInRows,
    SamplesInColumns,
}

/// Parameters of a stratified split: training fraction and RNG seed.
#[derive(Clone, Copy, Debug)]
pub struct SplitSpec {
    pub gamma: f64,
    pub seed: u64,
}

impl SplitSpec {
    pub fn new(gamma: f64, seed: u64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(FairError::InvalidArgument(format!(
                "split fraction must be in (0,1), got {gamma}"
            )));
        }
        Ok(Self { gamma, seed })
    }
}

fn detect_delimiter(header: &str) -> Result<u8> {
    let commas = header.matches(',').count();
    let tabs = header.matches('\t').count();
    if commas == 0 && tabs == 0 {
        return Err(FairError::InvalidData(
            "could not detect delimiter: header line contains neither ',' nor tab".into(),
        ));
    }
    Ok(if tabs > commas { b'\t' } else { b',' })
}

fn parse_cell(path: &Path, line: usize, name: &str, raw: &str) -> Result<f64> {
    let v: f64 = raw.trim().parse().map_err(|_| FairError::Parse {
        path: path.to_path_buf(),
        line,
        msg: format!("non-numeric cell '{raw}' in '{name}'"),
    })?;
    if !v.is_finite() {
        return Err(FairError::Parse {
            path: path.to_path_buf(),
            line,
            msg: format!("non-finite value '{raw}' in '{name}'"),
        });
    }
    Ok(v)
}

/// Map raw label strings onto {1, 2} in order of first appearance.
fn map_labels(path: &Path, raw: &[String]) -> Result<(Vec<ClassLabel>, [String; 2])> {
    let mut seen: Vec<String> = Vec::new();
    let mut labels = Vec::with_capacity(raw.len());
    for s in raw {
        let pos = match seen.iter().position(|x| x == s) {
            Some(pos) => pos,
            None => {
                seen.push(s.clone());
                if seen.len() > 2 {
                    return Err(FairError::InvalidData(format!(
                        "{}: expected exactly two classes, found a third label '{s}'",
                        path.display()
                    )));
                }
                seen.len() - 1
            }
        };
        labels.push(if pos == 0 {
            ClassLabel::One
        } else {
            ClassLabel::Two
        });
    }
    if seen.len() < 2 {
        return Err(FairError::InvalidData(format!(
            "{}: expected exactly two classes, found {}",
            path.display(),
            seen.len()
        )));
    }
    Ok((labels, [seen[0].clone(), seen[1].clone()]))
}

/// Loads a delimited numeric table with a header row into a [`LabeledDataset`].
///
/// The delimiter (comma or tab) is detected from the header line. With
/// [`Orientation::SamplesInRows`] the label source names a column; with
/// [`Orientation::SamplesInColumns`] it names a row and the header carries
/// sample ids. The two distinct label values become classes 1 and 2 in order
/// of first appearance.
pub fn load_matrix(
    path: impl AsRef<Path>,
    orientation: Orientation,
    label_source: &str,
) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| FairError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut reader = BufReader::new(file);
    let mut header = String::new();
    reader
        .read_line(&mut header)
        .map_err(|e| FairError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
    let delim = detect_delimiter(&header)?;

    let file = File::open(path).map_err(|e| FairError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(delim)
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let headers: Vec<String> = rdr
        .headers()
        .map_err(|e| FairError::Parse {
            path: path.to_path_buf(),
            line: 1,
            msg: e.to_string(),
        })?
        .iter()
        .map(|s| s.to_string())
        .collect();

    let mut records: Vec<Vec<String>> = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| FairError::Parse {
            path: path.to_path_buf(),
            line: i + 2,
            msg: e.to_string(),
        })?;
        if rec.len() != headers.len() {
            return Err(FairError::Parse {
                path: path.to_path_buf(),
                line: i + 2,
                msg: format!("expected {} fields, got {}", headers.len(), rec.len()),
            });
        }
        records.push(rec.iter().map(|s| s.to_string()).collect());
    }

    match orientation {
        Orientation::SamplesInRows => {
            let label_col = headers
                .iter()
                .position(|h| h == label_source)
                .ok_or_else(|| {
                    FairError::InvalidData(format!(
                        "{}: no column named '{label_source}'",
                        path.display()
                    ))
                })?;
            let n = records.len();
            let p = headers.len() - 1;
            let mut features = Array2::zeros((n, p));
            let mut raw_labels = Vec::with_capacity(n);
            for (i, rec) in records.iter().enumerate() {
                let mut k = 0;
                for (c, cell) in rec.iter().enumerate() {
                    if c == label_col {
                        raw_labels.push(cell.clone());
                    } else {
                        features[[i, k]] = parse_cell(path, i + 2, &headers[c], cell)?;
                        k += 1;
                    }
                }
            }
            let feature_names: Vec<String> = headers
                .iter()
                .enumerate()
                .filter(|(c, _)| *c != label_col)
                .map(|(_, h)| h.clone())
                .collect();
            let (labels, label_names) = map_labels(path, &raw_labels)?;
            LabeledDataset::with_names(features, labels, Some(feature_names), None, Some(label_names))
        }
        Orientation::SamplesInColumns => {
            if headers.len() < 2 {
                return Err(FairError::InvalidData(format!(
                    "{}: column-oriented file needs a name column plus samples",
                    path.display()
                )));
            }
            let sample_ids: Vec<String> = headers[1..].to_vec();
            let n = sample_ids.len();
            let mut raw_labels: Option<Vec<String>> = None;
            let mut feature_names: Vec<String> = Vec::new();
            let mut columns: Vec<Vec<f64>> = Vec::new();
            for (i, rec) in records.iter().enumerate() {
                let name = &rec[0];
                if name == label_source {
                    raw_labels = Some(rec[1..].to_vec());
                } else {
                    let mut row = Vec::with_capacity(n);
                    for cell in &rec[1..] {
                        row.push(parse_cell(path, i + 2, name, cell)?);
                    }
                    feature_names.push(name.clone());
                    columns.push(row);
                }
            }
            let raw_labels = raw_labels.ok_or_else(|| {
                FairError::InvalidData(format!(
                    "{}: no row named '{label_source}'",
                    path.display()
                ))
            })?;
            let p = columns.len();
            let mut features = Array2::zeros((n, p));
            for (j, col) in columns.iter().enumerate() {
                for (i, &v) in col.iter().enumerate() {
                    features[[i, j]] = v;
                }
            }
            let (labels, label_names) = map_labels(path, &raw_labels)?;
            LabeledDataset::with_names(
                features,
                labels,
                Some(feature_names),
                Some(sample_ids),
                Some(label_names),
            )
        }
    }
}

/// Writes a dataset as a samples-in-rows table (label column first).
///
/// Floats are printed in shortest round-trip form, so a reload recovers the
/// matrix exactly.
pub fn save_matrix(ds: &LabeledDataset, path: impl AsRef<Path>, delimiter: u8) -> Result<()> {
    let path = path.as_ref();
    let mut out = File::create(path).map_err(|e| FairError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let d = delimiter as char;
    let mut line = String::from("label");
    for j in 0..ds.p() {
        line.push(d);
        match ds.feature_names() {
            Some(names) => line.push_str(&names[j]),
            None => line.push_str(&format!("f{}", j + 1)),
        }
    }
    line.push('\n');
    for i in 0..ds.n() {
        line.push_str(ds.label_name(ds.labels()[i]));
        for &v in ds.sample(i).iter() {
            line.push(d);
            line.push_str(&format!("{v}"));
        }
        line.push('\n');
    }
    out.write_all(line.as_bytes()).map_err(|e| FairError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

/// Rescales every sample to zero mean and unit variance across its features
/// (variance denominator p - 1). Idempotent; fails on a constant sample.
pub fn standardize_samples(ds: &LabeledDataset) -> Result<LabeledDataset> {
    let p = ds.p();
    if p < 2 {
        return Err(FairError::InvalidData(
            "per-sample standardization needs at least 2 features".into(),
        ));
    }
    let mut features = ds.features().clone();
    for (i, mut row) in features.rows_mut().into_iter().enumerate() {
        let mean = row.sum() / p as f64;
        let ss: f64 = row.iter().map(|v| (v - mean) * (v - mean)).sum();
        let sd = (ss / (p as f64 - 1.0)).sqrt();
        if sd == 0.0 {
            return Err(FairError::InvalidData(format!(
                "constant sample '{}' cannot be standardized",
                ds.sample_name(i)
            )));
        }
        row.mapv_inplace(|v| (v - mean) / sd);
    }
    LabeledDataset::with_names(
        features,
        ds.labels().to_vec(),
        ds.feature_names().map(|n| n.to_vec()),
        ds.sample_ids().map(|n| n.to_vec()),
        Some(ds.label_names().clone()),
    )
}

fn round_half_up(x: f64) -> usize {
    (x + 0.5).floor() as usize
}

/// Splits each class into train/test, putting round(gamma * n_k) samples in
/// the training set (sampled without replacement from the seeded RNG).
///
/// For a fixed seed the split is reproducible, and calling with gamma and
/// 1 - gamma yields mirrored splits: the training set of one is the test set
/// of the other (away from exact rounding ties).
pub fn stratified_split(
    ds: &LabeledDataset,
    spec: &SplitSpec,
) -> Result<(LabeledDataset, LabeledDataset)> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut train_rows = Vec::new();
    let mut test_rows = Vec::new();
    for label in [ClassLabel::One, ClassLabel::Two] {
        let mut idx = ds.class_indices(label);
        let n_k = idx.len();
        let cut = round_half_up(spec.gamma * n_k as f64);
        if cut < 2 {
            return Err(FairError::InvalidData(format!(
                "class {label}: training split would have {cut} samples (needs at least 2)"
            )));
        }
        if n_k - cut < 1 {
            return Err(FairError::InvalidData(format!(
                "class {label}: test split would be empty"
            )));
        }
        idx.shuffle(&mut rng);
        // Reading the shuffled order from the front for gamma <= 1/2 and from
        // the back otherwise makes gamma and 1 - gamma exact mirrors.
        let (tr, te): (&[usize], &[usize]) = if spec.gamma <= 0.5 {
            (&idx[..cut], &idx[cut..])
        } else {
            (&idx[n_k - cut..], &idx[..n_k - cut])
        };
        train_rows.extend_from_slice(tr);
        test_rows.extend_from_slice(te);
    }
    train_rows.sort_unstable();
    test_rows.sort_unstable();
    Ok((ds.subset(&train_rows)?, ds.subset(&test_rows)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use std::collections::HashSet;

    fn toy(n1: usize, n2: usize, p: usize) -> LabeledDataset {
        let n = n1 + n2;
        let features = Array2::from_shape_fn((n, p), |(i, j)| (i * p + j) as f64 * 0.37 + 1.0);
        let labels = (0..n)
            .map(|i| {
                if i < n1 {
                    ClassLabel::One
                } else {
                    ClassLabel::Two
                }
            })
            .collect();
        LabeledDataset::new(features, labels).unwrap()
    }

    #[test]
    fn constructor_rejects_bad_inputs() {
        let f = array![[1.0, 2.0], [3.0, 4.0], [5.0, 6.0], [7.0, 8.0]];
        let l = vec![
            ClassLabel::One,
            ClassLabel::One,
            ClassLabel::Two,
            ClassLabel::Two,
        ];
        assert!(LabeledDataset::new(f.clone(), l.clone()).is_ok());

        let mut bad = f.clone();
        bad[[0, 0]] = f64::NAN;
        assert!(LabeledDataset::new(bad, l.clone()).is_err());

        let one_sided = vec![ClassLabel::One; 4];
        assert!(LabeledDataset::new(f.clone(), one_sided).is_err());

        assert!(LabeledDataset::new(f, l[..3].to_vec()).is_err());
    }

    #[test]
    fn load_samples_in_rows() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("toy.csv");
        std::fs::write(
            &path,
            "g1,g2,g3,cls\n1,2,3,A\n4,5,6,A\n7,8,9,B\n1,1,1,B\n2,2,3,B\n",
        )
        .unwrap();
        let ds = load_matrix(&path, Orientation::SamplesInRows, "cls").unwrap();
        assert_eq!(ds.n(), 5);
        assert_eq!(ds.p(), 3);
        assert_eq!(
            ds.labels(),
            &[
                ClassLabel::One,
                ClassLabel::One,
                ClassLabel::Two,
                ClassLabel::Two,
                ClassLabel::Two
            ]
        );
        assert_eq!(ds.feature_names().unwrap(), ["g1", "g2", "g3"]);
        assert_eq!(ds.label_names(), &["A".to_string(), "B".to_string()]);
        assert_eq!(ds.features()[[2, 1]], 8.0);
    }

    #[test]
    fn load_samples_in_columns_tsv() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("toy.tsv");
        std::fs::write(
            &path,
            "gene\ts1\ts2\ts3\ts4\nclass\tx\tx\ty\ty\ng1\t1\t2\t3\t4\ng2\t5\t6\t7\t8\n",
        )
        .unwrap();
        let ds = load_matrix(&path, Orientation::SamplesInColumns, "class").unwrap();
        assert_eq!(ds.n(), 4);
        assert_eq!(ds.p(), 2);
        assert_eq!(ds.sample_ids().unwrap(), ["s1", "s2", "s3", "s4"]);
        assert_eq!(ds.feature_names().unwrap(), ["g1", "g2"]);
        assert_eq!(ds.features()[[3, 0]], 4.0);
        assert_eq!(ds.features()[[0, 1]], 5.0);
    }

    #[test]
    fn load_rejects_three_classes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "f1,cls\n1,A\n2,A\n3,B\n4,B\n5,C\n").unwrap();
        let err = load_matrix(&path, Orientation::SamplesInRows, "cls").unwrap_err();
        assert!(err.to_string().contains("exactly two classes"));
    }

    #[test]
    fn load_rejects_non_numeric_cell() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "f1,cls\n1,A\nx,A\n3,B\n4,B\n").unwrap();
        let err = load_matrix(&path, Orientation::SamplesInRows, "cls").unwrap_err();
        assert!(err.to_string().contains("non-numeric"));
    }

    #[test]
    fn load_rejects_small_class() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "f1,cls\n1,A\n2,A\n3,A\n4,B\n").unwrap();
        assert!(load_matrix(&path, Orientation::SamplesInRows, "cls").is_err());
    }

    #[test]
    fn save_load_round_trip_exact() {
        let mut ds = toy(3, 4, 5);
        // Exercise non-trivial float printing.
        ds.features[[0, 0]] = 1.0 / 3.0;
        ds.features[[1, 2]] = 1e-17;
        ds.features[[2, 4]] = -98765.432109876;
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rt.csv");
        save_matrix(&ds, &path, b',').unwrap();
        let back = load_matrix(&path, Orientation::SamplesInRows, "label").unwrap();
        assert_eq!(back.features(), ds.features());
        assert_eq!(back.labels(), ds.labels());
    }

    #[test]
    fn standardize_hand_example() {
        let f = array![[1.0, 2.0, 3.0], [4.0, 4.0, 7.0], [0.0, 1.0, 5.0], [2.0, 0.0, 1.0]];
        let l = vec![
            ClassLabel::One,
            ClassLabel::One,
            ClassLabel::Two,
            ClassLabel::Two,
        ];
        let ds = LabeledDataset::new(f, l).unwrap();
        let std = standardize_samples(&ds).unwrap();
        // (1,2,3) has mean 2 and sd 1 with the p-1 denominator.
        assert_eq!(std.sample(0).to_vec(), vec![-1.0, 0.0, 1.0]);
    }

    #[test]
    fn standardize_is_idempotent() {
        let ds = toy(5, 5, 7);
        let once = standardize_samples(&ds).unwrap();
        let twice = standardize_samples(&once).unwrap();
        for (a, b) in once.features().iter().zip(twice.features().iter()) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn standardize_rejects_constant_sample() {
        let f = array![[5.0, 5.0, 5.0], [1.0, 2.0, 3.0], [0.0, 1.0, 2.0], [4.0, 1.0, 0.0]];
        let l = vec![
            ClassLabel::One,
            ClassLabel::One,
            ClassLabel::Two,
            ClassLabel::Two,
        ];
        let ds = LabeledDataset::new(f, l).unwrap();
        let err = standardize_samples(&ds).unwrap_err();
        assert!(err.to_string().contains("constant sample"));
    }

    #[test]
    fn split_counts_partition_and_determinism() {
        let ds = toy(10, 10, 3);
        let spec = SplitSpec::new(0.5, 42).unwrap();
        let (tr, te) = stratified_split(&ds, &spec).unwrap();
        assert_eq!(tr.class_counts(), (5, 5));
        assert_eq!(te.class_counts(), (5, 5));

        let (tr2, _) = stratified_split(&ds, &spec).unwrap();
        assert_eq!(tr.features(), tr2.features());
        assert_eq!(tr.labels(), tr2.labels());
    }

    #[test]
    fn split_rounding_matches_half_up_rule() {
        let ds = toy(47, 25, 2);
        let spec = SplitSpec::new(0.4, 7).unwrap();
        let (tr, te) = stratified_split(&ds, &spec).unwrap();
        assert_eq!(tr.class_counts(), (19, 10));
        assert_eq!(te.class_counts(), (28, 15));
    }

    #[test]
    fn split_gamma_mirror() {
        let ds = toy(9, 13, 2);
        let a = stratified_split(&ds, &SplitSpec::new(0.4, 99).unwrap()).unwrap();
        let b = stratified_split(&ds, &SplitSpec::new(0.6, 99).unwrap()).unwrap();
        let sig = |d: &LabeledDataset| -> HashSet<String> {
            (0..d.n())
                .map(|i| format!("{:?}{:?}", d.sample(i).to_vec(), d.labels()[i]))
                .collect()
        };
        assert_eq!(sig(&a.0), sig(&b.1));
        assert_eq!(sig(&a.1), sig(&b.0));
    }

    #[test]
    fn split_rejects_tiny_training_class() {
        let ds = toy(3, 20, 2);
        let err = stratified_split(&ds, &SplitSpec::new(0.4, 1).unwrap()).unwrap_err();
        assert!(err.to_string().contains("at least 2"));
    }
}
