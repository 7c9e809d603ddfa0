//! Dataset serialization and manifests.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cloud::{CloudSpec, RNG_ALGORITHM};
use crate::csv_data::CsvSchema;
use crate::dataset::Dataset;

/// Canonical CSV serialization of a dataset: header `f1,...,fd,label`,
/// one row per sample in canonical order, features with full round-trip
/// precision, labels as `1` / `-1`.
pub fn dataset_to_csv_string(dataset: &Dataset) -> String {
    let mut out = String::new();
    for f in 0..dataset.dim() {
        out.push_str(&format!("f{},", f + 1));
    }
    out.push_str("label\n");
    for s in dataset.samples() {
        for v in &s.features {
            out.push_str(&format!("{v},"));
        }
        out.push_str(if s.label.is_positive() { "1" } else { "-1" });
        out.push('\n');
    }
    out
}

/// SHA-256 hex digest of the canonical CSV serialization.
pub fn dataset_checksum(dataset: &Dataset) -> String {
    let mut hasher = Sha256::new();
    hasher.update(dataset_to_csv_string(dataset).as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Provenance record written alongside a dataset.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<CloudSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schema: Option<CsvSchema>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rng_algorithm: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub m: usize,
    pub n: usize,
    pub d: usize,
    pub checksum: String,
}

impl DatasetManifest {
    pub fn for_cloud(spec: &CloudSpec, dataset: &Dataset) -> Self {
        Self {
            source: "synthetic-cloud".to_string(),
            spec: Some(*spec),
            schema: None,
            rng_algorithm: Some(RNG_ALGORITHM.to_string()),
            seed: Some(spec.seed),
            m: dataset.m(),
            n: dataset.n(),
            d: dataset.dim(),
            checksum: dataset_checksum(dataset),
        }
    }

    pub fn for_csv(source: &str, schema: &CsvSchema, dataset: &Dataset) -> Self {
        Self {
            source: source.to_string(),
            spec: None,
            schema: Some(schema.clone()),
            rng_algorithm: None,
            seed: None,
            m: dataset.m(),
            n: dataset.n(),
            d: dataset.dim(),
            checksum: dataset_checksum(dataset),
        }
    }

    pub fn to_json(&self) -> crate::error::Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cloud::gen_cloud;
    use crate::csv_data::{load_csv_reader, CsvSchema};

    #[test]
    fn csv_serialization_roundtrips_through_loader() {
        let spec = CloudSpec::overlapping(15, 17, 5);
        let ds = gen_cloud(&spec).unwrap();
        let text = dataset_to_csv_string(&ds);
        let loaded = load_csv_reader(text.as_bytes(), &CsvSchema::default()).unwrap();
        assert_eq!(loaded.dataset, ds);
    }

    #[test]
    fn checksum_is_stable_and_content_sensitive() {
        let spec = CloudSpec::overlapping(10, 10, 5);
        let a = gen_cloud(&spec).unwrap();
        assert_eq!(dataset_checksum(&a), dataset_checksum(&a));
        let b = gen_cloud(&CloudSpec { seed: 6, ..spec }).unwrap();
        assert_ne!(dataset_checksum(&a), dataset_checksum(&b));
        // 64 hex chars.
        assert_eq!(dataset_checksum(&a).len(), 64);
    }

    #[test]
    fn cloud_manifest_fields() {
        let spec = CloudSpec::separable(8, 9, 3);
        let ds = gen_cloud(&spec).unwrap();
        let manifest = DatasetManifest::for_cloud(&spec, &ds);
        assert_eq!(manifest.m, 8);
        assert_eq!(manifest.n, 17);
        assert_eq!(manifest.d, 2);
        assert_eq!(manifest.seed, Some(3));
        assert_eq!(manifest.rng_algorithm.as_deref(), Some(RNG_ALGORITHM));
        let json = manifest.to_json().unwrap();
        let back: DatasetManifest = serde_json::from_str(&json).unwrap();
        assert_eq!(back.checksum, manifest.checksum);
    }
}
