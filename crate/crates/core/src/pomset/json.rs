//! JSON encoding of pomsets and pomset languages.

use serde::{Deserialize, Serialize};

use super::{LabelledPosetC, Pomsetc};
use crate::error::{Error, Result};
use crate::symbol::{ActionSymbol, CommTable};

#[derive(Serialize, Deserialize)]
struct Node {
    id: usize,
    label: String,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct PomsetJson {
    nodes: Vec<Node>,
    #[serde(default)]
    eedges: Vec<[usize; 2]>,
    #[serde(default)]
    cedges: Vec<[usize; 2]>,
}

impl PomsetJson {
    pub(crate) fn from_pomset(u: &Pomsetc) -> Self {
        PomsetJson {
            nodes: u
                .labels()
                .iter()
                .enumerate()
                .map(|(id, l)| Node {
                    id,
                    label: l.to_string(),
                })
                .collect(),
            eedges: u.exec_covers().into_iter().map(|(i, j)| [i, j]).collect(),
            cedges: u.comm_pairs().into_iter().map(|(i, j)| [i, j]).collect(),
        }
    }

    pub(crate) fn to_poset(&self, table: &CommTable) -> Result<LabelledPosetC> {
        let mut ids: Vec<usize> = self.nodes.iter().map(|n| n.id).collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.len() != self.nodes.len() {
            return Err(Error::Format("duplicate node id".into()));
        }
        let index = |id: usize| -> Result<usize> {
            ids.binary_search(&id)
                .map_err(|_| Error::Format(format!("unknown node id {id}")))
        };
        let mut labels = vec![ActionSymbol::base("_"); ids.len()];
        for n in &self.nodes {
            labels[index(n.id)?] = ActionSymbol::parse(&n.label, table)?;
        }
        let e = self
            .eedges
            .iter()
            .map(|[i, j]| Ok((index(*i)?, index(*j)?)))
            .collect::<Result<Vec<_>>>()?;
        let c = self
            .cedges
            .iter()
            .map(|[i, j]| Ok((index(*i)?, index(*j)?)))
            .collect::<Result<Vec<_>>>()?;
        LabelledPosetC::new(labels, &e, &c)
    }
}

/// Serializes a pomset with covering execution edges.
pub fn pomset_to_json(u: &Pomsetc) -> serde_json::Value {
    serde_json::to_value(PomsetJson::from_pomset(u)).expect("serializable")
}

/// Parses and canonicalizes a pomset.
pub fn pomset_from_json(text: &str, table: &CommTable) -> Result<Pomsetc> {
    let p: PomsetJson = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    Ok(p.to_poset(table)?.canonicalize())
}

/// Serializes a language as an array sorted by event count, then canonical encoding.
pub fn language_to_json<'a>(members: impl IntoIterator<Item = &'a Pomsetc>) -> serde_json::Value {
    let mut v: Vec<&Pomsetc> = members.into_iter().collect();
    v.sort();
    serde_json::Value::Array(v.into_iter().map(pomset_to_json).collect())
}

/// Parses a language dump.
pub fn language_from_json(text: &str, table: &CommTable) -> Result<Vec<Pomsetc>> {
    let ps: Vec<PomsetJson> =
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    ps.iter()
        .map(|p| Ok(p.to_poset(table)?.canonicalize()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::super::*;
    use super::*;

    #[test]
    fn round_trip() {
        let t = CommTable::total();
        let u = compose_seq(
            &compose_comm(&act("a"), &act("b")),
            &par(&[act("c"), act("d")]),
        );
        let text = pomset_to_json(&u).to_string();
        assert_eq!(pomset_from_json(&text, &t).unwrap(), u);
        let r = Pomsetc::primitive(ActionSymbol::comm_unchecked("a", "b"));
        let text = pomset_to_json(&r).to_string();
        assert!(text.contains("rho(a,b)"));
        assert_eq!(pomset_from_json(&text, &t).unwrap(), r);
    }

    #[test]
    fn rejects_bad_ids() {
        let t = CommTable::total();
        assert!(
            pomset_from_json(r#"{"nodes":[{"id":0,"label":"a"}],"eedges":[[0,1]]}"#, &t).is_err()
        );
        assert!(pomset_from_json(
            r#"{"nodes":[{"id":0,"label":"a"},{"id":0,"label":"b"}]}"#,
            &t
        )
        .is_err());
    }
}
