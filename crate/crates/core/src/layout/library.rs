use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::LayoutError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PinEdge {
    N,
    E,
    S,
    W,
}

impl fmt::Display for PinEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// One pre-characterized physical realization of an IP block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TemplateVariant {
    #[serde(default)]
    pub ip: String,
    pub id: String,
    pub freq_mhz: f64,
    pub width_um: f64,
    pub height_um: f64,
    pub leakage_mw: f64,
    pub cycles_per_op: u32,
    pub pin_edge: PinEdge,
}

impl TemplateVariant {
    pub fn area(&self) -> f64 {
        self.width_um * self.height_um
    }

    pub fn aspect_ratio(&self) -> f64 {
        self.width_um / self.height_um
    }
}

/// Manifest entry: the variants available for one IP.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IpTemplates {
    pub ip: String,
    pub variants: Vec<TemplateVariant>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Manifest {
    Many(Vec<IpTemplates>),
    One(IpTemplates),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TemplateLibrary {
    ips: BTreeMap<String, Vec<TemplateVariant>>,
}

/// Parse a manifest: either one `{ip, variants}` entry or a list of them.
pub fn load_templates(manifest: &str) -> Result<TemplateLibrary, LayoutError> {
    if manifest.trim().is_empty() {
        return Ok(TemplateLibrary::default());
    }
    let entries = match serde_json::from_str(manifest).map_err(|e| LayoutError::Manifest(e.to_string()))? {
        Manifest::Many(list) => list,
        Manifest::One(entry) => vec![entry],
    };
    TemplateLibrary::from_entries(entries)
}

impl TemplateLibrary {
    pub fn from_entries(entries: Vec<IpTemplates>) -> Result<Self, LayoutError> {
        let mut ips: BTreeMap<String, Vec<TemplateVariant>> = BTreeMap::new();
        for entry in entries {
            let list = ips.entry(entry.ip.clone()).or_default();
            for mut v in entry.variants {
                v.ip = entry.ip.clone();
                let bad = |what: &str| LayoutError::InvalidVariant { ip: v.ip.clone(), id: v.id.clone(), reason: what.to_string() };
                if !(v.width_um > 0.0 && v.height_um > 0.0) || !v.width_um.is_finite() || !v.height_um.is_finite() {
                    return Err(bad("dimensions must be positive"));
                }
                if !(v.freq_mhz > 0.0) || !(v.leakage_mw >= 0.0) {
                    return Err(bad("frequency must be positive and leakage non-negative"));
                }
                if v.cycles_per_op < 1 {
                    return Err(bad("cycles per operation must be at least 1"));
                }
                if list.iter().any(|o| o.id == v.id) {
                    return Err(LayoutError::DuplicateVariant { ip: v.ip, id: v.id });
                }
                list.push(v);
            }
        }
        for list in ips.values_mut() {
            list.sort_by(|a, b| b.freq_mhz.total_cmp(&a.freq_mhz).then(a.area().total_cmp(&b.area())).then(a.id.cmp(&b.id)));
        }
        Ok(TemplateLibrary { ips })
    }

    /// Variants of `ip`, fastest first, then smallest.
    pub fn variants(&self, ip: &str) -> &[TemplateVariant] {
        self.ips.get(ip).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn variant(&self, ip: &str, id: &str) -> Result<&TemplateVariant, LayoutError> {
        if !self.ips.contains_key(ip) {
            return Err(LayoutError::UnknownIp(ip.to_string()));
        }
        self.variants(ip)
            .iter()
            .find(|v| v.id == id)
            .ok_or_else(|| LayoutError::UnknownVariant { ip: ip.to_string(), id: id.to_string() })
    }

    pub fn ips(&self) -> impl Iterator<Item = &str> {
        self.ips.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.ips.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Manifest entries, one per IP, in name order.
    pub fn entries(&self) -> Vec<IpTemplates> {
        self.ips.iter().map(|(ip, variants)| IpTemplates { ip: ip.clone(), variants: variants.clone() }).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn avg_filter() -> String {
        let mut variants = Vec::new();
        for (f, tag) in [(200, "lo"), (400, "mid"), (800, "hi")] {
            for (w, h, shape) in [(20, 10, "wide"), (10, 20, "tall")] {
                variants.push(format!(
                    r#"{{"id":"{tag}-{shape}","freq_mhz":{f},"width_um":{w},"height_um":{},"leakage_mw":0.1,"cycles_per_op":1,"pin_edge":"W"}}"#,
                    h * f / 200
                ));
            }
        }
        format!(r#"{{"ip":"avg-filter","variants":[{}]}}"#, variants.join(","))
    }

    #[test]
    fn three_frequencies_two_aspects() {
        let lib = load_templates(&avg_filter()).unwrap();
        assert_eq!(lib.len(), 6);
        let freqs: Vec<f64> = lib.variants("avg-filter").iter().map(|v| v.freq_mhz).collect();
        assert_eq!(freqs, [800.0, 800.0, 400.0, 400.0, 200.0, 200.0]);
        let first = &lib.variants("avg-filter")[0];
        assert!(first.area() <= lib.variants("avg-filter")[1].area());
    }

    #[test]
    fn empty_manifest() {
        for text in ["", "[]"] {
            let lib = load_templates(text).unwrap();
            assert!(lib.is_empty());
            assert!(lib.variants("avg-filter").is_empty());
        }
    }

    #[test]
    fn invalid_variants() {
        let zero = r#"{"ip":"x","variants":[{"id":"a","freq_mhz":1,"width_um":0,"height_um":1,"leakage_mw":0,"cycles_per_op":1,"pin_edge":"N"}]}"#;
        assert!(matches!(load_templates(zero), Err(LayoutError::InvalidVariant { .. })));
        let one = r#"{"id":"a","freq_mhz":1,"width_um":1,"height_um":1,"leakage_mw":0,"cycles_per_op":1,"pin_edge":"N"}"#;
        let dup = format!(r#"{{"ip":"x","variants":[{one},{one}]}}"#);
        assert!(matches!(load_templates(&dup), Err(LayoutError::DuplicateVariant { .. })));
        assert!(matches!(load_templates("{"), Err(LayoutError::Manifest(_))));
    }
}
